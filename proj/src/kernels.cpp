#include "abloop/kernels.hpp"

#include <cmath>
#include <exception>

#include "abloop/error.hpp"

namespace abloop {

namespace {

void validate(const StripFieldRequest& rq) {
  if (rq.frame == nullptr) throw Error(ErrorKind::precondition, "strip field request without frame");
  if (rq.n_s < 4 || rq.n_u < 3 || rq.n_u % 2 == 0) {
    throw Error(ErrorKind::precondition, "strip grid needs n_s >= 4 and odd n_u >= 3");
  }
  if (!(rq.a > 0.0) || rq.a > rq.frame->a1()) {
    throw Error(ErrorKind::precondition, "strip halfwidth outside (0, a1]");
  }
}

StripFields allocate(const StripFieldRequest& rq) {
  StripFields f;
  f.n_s = rq.n_s;
  f.n_u = rq.n_u;
  f.s_nodes.resize(rq.n_s);
  f.u_nodes.resize(rq.n_u);
  const double hs = rq.frame->length() / rq.n_s;
  const double hu = 2.0 * rq.a / (rq.n_u - 1);
  for (int i = 0; i < rq.n_s; ++i) f.s_nodes[i] = i * hs;
  const int mid = rq.n_u / 2;
  for (int j = 0; j < rq.n_u; ++j) f.u_nodes[j] = (j - mid) * hu;
  f.u_nodes.front() = -rq.a;
  f.u_nodes.back() = rq.a;
  const std::size_t nodes = static_cast<std::size_t>(rq.n_s) * rq.n_u;
  f.potential.resize(nodes);
  f.s_stiffness.resize(nodes);
  f.s_flux.resize(nodes);
  f.u_flux.resize(static_cast<std::size_t>(rq.n_s) * (rq.n_u - 1));
  f.gamma_nodes.resize(rq.n_s);
  if (rq.with_phase) f.phase.resize(nodes);
  return f;
}

// dK/ds on the u-grid at arc length s, 5-point stencil with the frame's sample spacing.
std::vector<double> phase_ds_column(const StripFieldRequest& rq, double s, const std::vector<double>& u) {
  const FrameField& fr = *rq.frame;
  const double h = fr.length() / fr.n_samples();
  const auto m2 = phase_column(fr.at(s - 2 * h), rq.c0, u, rq.coeffs);
  const auto m1 = phase_column(fr.at(s - h), rq.c0, u, rq.coeffs);
  const auto p1 = phase_column(fr.at(s + h), rq.c0, u, rq.coeffs);
  const auto p2 = phase_column(fr.at(s + 2 * h), rq.c0, u, rq.coeffs);
  std::vector<double> d(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) d[j] = (m2[j] - 8.0 * m1[j] + 8.0 * p1[j] - p2[j]) / (12.0 * h);
  return d;
}

void fill_column(const StripFieldRequest& rq, int i, StripFields& f) {
  const FrameField& fr = *rq.frame;
  const double c0 = rq.c0;
  const int nu = rq.n_u;
  const double hs = fr.length() / rq.n_s;
  const std::vector<double>& u = f.u_nodes;
  const bool tilde = rq.form == StripForm::b_tilde;

  // nodes (s_i, u_j) and u-faces (s_i, u_{j+1/2})
  const FramePoint g = fr.at(f.s_nodes[i]);
  f.gamma_nodes[i] = g.gamma;
  std::vector<double> Ks;
  if (tilde && c0 != 0.0) Ks = phase_ds_column(rq, g.s, u);
  for (int j = 0; j < nu; ++j) {
    const double jac = 1.0 + u[j] * g.gamma;
    const double th = theta(g, u[j]);
    const double V = effective_potential(g, u[j]);
    double Z = c0 * c0 * th + V;
    if (tilde && c0 != 0.0) {
      const Omega om = omega(g, u[j], rq.coeffs);
      const double ks = Ks[j];
      Z += ks * ks / (jac * jac) + 2.0 * c0 * om.omega1 * ks;
      if (rq.coeffs == CoeffVariant::derived) {
        Z -= c0 * c0 * om.omega2 * om.omega2;
      } else {
        const double ku = c0 * om.omega2;
        Z += ku * ku - 2.0 * c0 * om.omega2 * ks;
      }
    }
    f.potential[static_cast<std::size_t>(i) * nu + j] = Z;
  }
  for (int j = 0; j + 1 < nu; ++j) {
    const double um = 0.5 * (u[j] + u[j + 1]);
    // b carries -2 c0 Omega_2 Im(conj(g) g_u); the gauge removes it in b~
    f.u_flux[static_cast<std::size_t>(i) * (nu - 1) + j] = tilde ? 0.0 : -c0 * omega(g, um, CoeffVariant::derived).omega2;
  }
  if (rq.with_phase) {
    const auto K = phase_column(g, c0, u, CoeffVariant::derived);
    for (int j = 0; j < nu; ++j) f.phase[static_cast<std::size_t>(i) * nu + j] = K[j];
  }

  // s-faces (s_{i+1/2}, u_j)
  const FramePoint gf = fr.at((i + 0.5) * hs);
  std::vector<double> Ksf;
  if (tilde && c0 != 0.0) Ksf = phase_ds_column(rq, gf.s, u);
  for (int j = 0; j < nu; ++j) {
    const double jac = 1.0 + u[j] * gf.gamma;
    const std::size_t idx = static_cast<std::size_t>(i) * nu + j;
    f.s_stiffness[idx] = 1.0 / (jac * jac);
    double c = c0 * omega(gf, u[j], CoeffVariant::derived).omega1;
    if (tilde && c0 != 0.0) c += Ksf[j] / (jac * jac);
    f.s_flux[idx] = c;
  }
}

}  // namespace

namespace serial {

StripFields evaluate_strip_fields(const StripFieldRequest& rq) {
  validate(rq);
  StripFields f = allocate(rq);
  for (int i = 0; i < rq.n_s; ++i) fill_column(rq, i, f);
  return f;
}

}  // namespace serial

namespace parallel {

StripFields evaluate_strip_fields(const StripFieldRequest& rq) {
  validate(rq);
  StripFields f = allocate(rq);
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rq.n_s; ++i) {
    try {
      fill_column(rq, i, f);
    } catch (...) {
#pragma omp critical(abloop_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return f;
}

}  // namespace parallel

}  // namespace abloop
