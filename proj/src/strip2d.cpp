#include "abloop/strip2d.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "abloop/error.hpp"
#include "abloop/transverse.hpp"

namespace abloop {

namespace {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<cd>;

double shift_for(double beta, double gamma_plus) { return -0.25 * beta * beta - gamma_plus * gamma_plus - 1.0; }

EigenPairs eigs_of(const SparseMatrixC& A, int k, double sigma) {
  if (k < 1 || k > 10) throw Error(ErrorKind::precondition, "lowest_eigs supports 1 <= k <= 10");
  ShiftInvertOptions opt;
  opt.sigma = sigma;
  for (int attempt = 0; attempt < 8; ++attempt) {
    EigenPairs r = shift_invert_eigs(A, k, opt);
    if (r.below_shift == 0) return r;
    opt.sigma -= std::max(1.0, 0.25 * std::abs(opt.sigma));
  }
  throw Error(ErrorKind::convergence, "could not place the shift below the spectrum");
}

}  // namespace

StripGrid StripGrid::for_problem(double a, double beta, int n_s) {
  if (!(a > 0.0)) throw Error(ErrorKind::precondition, "strip grid needs a > 0");
  double hmax = a / 8.0;
  if (beta > 0.0) hmax = std::min(hmax, 0.5 / beta);
  int intervals = static_cast<int>(std::ceil(2.0 * a / hmax - 1e-9));
  if (intervals % 2) ++intervals;
  intervals = std::max(intervals, 128);
  return {n_s, intervals + 1};
}

std::string StripOperator::tag() const {
  std::ostringstream os;
  os << to_string(setup.form) << to_string(setup.side) << ' ' << to_string(setup.coeffs);
  if (setup.side == Side::minus) os << (setup.robin == RobinKind::signed_curvature ? " robin-signed" : " robin-gamma+");
  else os << " dirichlet";
  os << ' ' << grid.n_s << 'x' << grid.n_u;
  return os.str();
}

StripOperator assemble(const FrameField& frame, Flux flux, double a, double beta, const StripGrid& grid,
                       const StripSetup& setup) {
  const double gp = frame.gamma_plus();
  if (!(a > 0.0) || a > frame.a1() || (gp > 0.0 && a >= 1.0 / (2.0 * gp))) {
    throw Error(ErrorKind::precondition, "strip halfwidth must satisfy 0 < a <= a1 and a < 1/(2 gamma_plus)");
  }
  if (grid.n_s < 4 || grid.n_u < 3 || grid.n_u % 2 == 0) {
    throw Error(ErrorKind::precondition, "strip grid needs n_s >= 4 and odd n_u >= 3");
  }
  if (beta < 0.0) throw Error(ErrorKind::precondition, "strip form needs beta >= 0");
  StripOperator op;
  op.grid = grid;
  op.setup = setup;
  op.a = a;
  op.beta = beta;
  op.c0 = flux.c0;
  op.gamma_plus = gp;
  op.h_s = frame.length() / grid.n_s;
  op.h_u = 2.0 * a / (grid.n_u - 1);
  if (beta > 0.0 && op.h_u > 1.0 / beta) {
    std::ostringstream os;
    os << "h_u = " << op.h_u << " exceeds 1/beta = " << 1.0 / beta << "; use n_u >= "
       << StripGrid::for_problem(a, beta).n_u;
    throw Error(ErrorKind::resolution, os.str());
  }

  StripFieldRequest rq;
  rq.frame = &frame;
  rq.c0 = flux.c0;
  rq.a = a;
  rq.n_s = grid.n_s;
  rq.n_u = grid.n_u;
  rq.form = setup.form;
  rq.coeffs = setup.coeffs;
  rq.with_phase = setup.with_phase;
  const StripFields f = setup.parallel ? parallel::evaluate_strip_fields(rq) : serial::evaluate_strip_fields(rq);

  const bool dirichlet = setup.side == Side::plus;
  const int ns = grid.n_s, nu = grid.n_u;
  op.first_j = dirichlet ? 1 : 0;
  const int last_j = dirichlet ? nu - 2 : nu - 1;
  op.m_u = last_j - op.first_j + 1;
  const int n = op.unknowns();
  const double hs = op.h_s, hu = op.h_u;
  auto active = [&](int j) { return j >= op.first_j && j <= last_j; };
  auto weight_u = [&](int j) { return (j == 0 || j == nu - 1) ? 0.5 * hu : hu; };

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n) * 9);
  op.mass.resize(n);
  const cd I(0.0, 1.0);
  for (int i = 0; i < ns; ++i) {
    const int ip = (i + 1) % ns;
    for (int j = op.first_j; j <= last_j; ++j) {
      const int p = op.index(i, j);
      const std::size_t node = static_cast<std::size_t>(i) * nu + j;
      const double w = weight_u(j) * hs;
      op.mass(p) = w;
      // s-face (i+1/2, j)
      const int q = op.index(ip, j);
      const double k = w * f.s_stiffness[node] / (hs * hs);
      const double c = w * f.s_flux[node] / hs;
      t.emplace_back(p, p, k);
      t.emplace_back(q, q, k);
      t.emplace_back(p, q, -k - I * c);
      t.emplace_back(q, p, -k + I * c);
      // zeroth order
      t.emplace_back(p, p, w * f.potential[node]);
    }
    // u-faces (i, j+1/2)
    for (int j = 0; j + 1 < nu; ++j) {
      const double w = hs * hu;
      const double k = w / (hu * hu);
      const double c = w * f.u_flux[static_cast<std::size_t>(i) * (nu - 1) + j] / hu;
      const bool a0 = active(j), a1 = active(j + 1);
      if (a0) t.emplace_back(op.index(i, j), op.index(i, j), k);
      if (a1) t.emplace_back(op.index(i, j + 1), op.index(i, j + 1), k);
      if (a0 && a1) {
        const int p = op.index(i, j), q = op.index(i, j + 1);
        t.emplace_back(p, q, -k - I * c);
        t.emplace_back(q, p, -k + I * c);
      }
    }
    // delta line
    const int mid = op.index(i, nu / 2);
    t.emplace_back(mid, mid, -beta * hs);
    if (!dirichlet) {
      const double g = f.gamma_nodes[i];
      double top, bottom;
      if (setup.robin == RobinKind::signed_curvature) {
        top = -0.5 * g / (1.0 + a * g);
        bottom = 0.5 * g / (1.0 - a * g);
      } else {
        top = -gp;
        bottom = -gp;
      }
      t.emplace_back(op.index(i, nu - 1), op.index(i, nu - 1), hs * top);
      t.emplace_back(op.index(i, 0), op.index(i, 0), hs * bottom);
    }
  }
  op.form.resize(n, n);
  op.form.setFromTriplets(t.begin(), t.end());
  op.form.makeCompressed();

  const Eigen::VectorXd r = op.mass.cwiseSqrt().cwiseInverse();
  // r_p r_q is formed first so that conjugate entries stay exact conjugates
  op.matrix = op.form;
  for (int c = 0; c < op.matrix.outerSize(); ++c)
    for (SparseMatrixC::InnerIterator it(op.matrix, c); it; ++it) it.valueRef() *= r(it.row()) * r(it.col());
  op.matrix.makeCompressed();

  if (setup.with_phase) {
    op.phase.resize(n);
    for (int i = 0; i < ns; ++i)
      for (int j = op.first_j; j <= last_j; ++j) op.phase(op.index(i, j)) = f.phase[static_cast<std::size_t>(i) * nu + j];
  }
  return op;
}

EigenPairs lowest_eigs(const StripOperator& op, int k) { return eigs_of(op.matrix, k, shift_for(op.beta, op.gamma_plus)); }

StripEstimate estimate_eigs(const FrameField& frame, Flux flux, double a, double beta, const StripGrid& grid,
                            const StripSetup& setup, int k) {
  StripEstimate e;
  e.coarse = grid;
  e.fine = grid.refined();
  e.raw_coarse = lowest_eigs(assemble(frame, flux, a, beta, e.coarse, setup), k).values;
  e.raw_fine = lowest_eigs(assemble(frame, flux, a, beta, e.fine, setup), k).values;

  if (beta > 0.0) {
    TransverseProblem tp{a, beta, setup.side, 0.0};
    if (setup.side == Side::minus && setup.robin == RobinKind::gamma_plus) tp.gamma_plus = frame.gamma_plus();
    try {
      const double exact = transverse_secular(tp).zeta;
      e.defect_coarse = transverse_grid_eigenvalues(tp, e.coarse.n_u - 1, 1).eigenvalues.at(0) - exact;
      e.defect_fine = transverse_grid_eigenvalues(tp, e.fine.n_u - 1, 1).eigenvalues.at(0) - exact;
      e.defect_corrected = true;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::root_bracketing) throw;
    }
  }
  for (int j = 0; j < k; ++j) {
    const double c = e.raw_coarse[j] - e.defect_coarse;
    const double f = e.raw_fine[j] - e.defect_fine;
    const double v = (4.0 * f - c) / 3.0;
    e.value.push_back(v);
    e.tolerance.push_back(std::abs(v - f) + 1e-12 * std::max(1.0, std::abs(v)));
  }
  return e;
}

Lemma2Report lemma2_check(const FrameField& frame, Flux flux, double a, double beta, const StripGrid& grid, Side side,
                          CoeffVariant coeffs, int k) {
  Lemma2Report r;
  r.coarse = grid;
  r.fine = grid.refined();
  StripSetup sb;
  sb.form = StripForm::b;
  sb.side = side;
  sb.coeffs = coeffs;
  sb.with_phase = true;
  StripSetup st = sb;
  st.form = StripForm::b_tilde;
  st.with_phase = false;

  // (i) lattice similarity
  const StripOperator b = assemble(frame, flux, a, beta, r.coarse, sb);
  const double sigma = shift_for(beta, frame.gamma_plus());
  Eigen::VectorXcd d(b.unknowns());
  for (int p = 0; p < b.unknowns(); ++p) d(p) = std::polar(1.0, b.phase(p));
  SparseMatrixC conj = d.conjugate().asDiagonal() * b.matrix * d.asDiagonal();
  const EigenPairs eb = eigs_of(b.matrix, k, sigma);
  const EigenPairs ec = eigs_of(conj, k, sigma);
  r.eig_b = eb.values;
  r.eig_conjugated = ec.values;
  for (int j = 0; j < k; ++j) {
    r.similarity_error =
        std::max(r.similarity_error, std::abs(eb.values[j] - ec.values[j]) / std::max(1.0, std::abs(eb.values[j])));
  }
  r.similarity_ok = r.similarity_error <= 1e-12;

  // (ii) independent discretisations on two grids
  const EigenPairs et = eigs_of(assemble(frame, flux, a, beta, r.coarse, st).matrix, k, sigma);
  const StripOperator bf = assemble(frame, flux, a, beta, r.fine, sb);
  const EigenPairs ebf = eigs_of(bf.matrix, k, sigma);
  const EigenPairs etf = eigs_of(assemble(frame, flux, a, beta, r.fine, st).matrix, k, sigma);
  r.order_ok = true;
  for (int j = 0; j < k; ++j) {
    const double dc = eb.values[j] - et.values[j];
    const double df = ebf.values[j] - etf.values[j];
    r.diff_coarse.push_back(dc);
    r.diff_fine.push_back(df);
    const double floor = 1e-9 * std::max(1.0, std::abs(eb.values[j]));
    if (std::abs(dc) > floor) {
      r.order_resolved = true;
      const double p = std::log2(std::abs(dc) / std::max(std::abs(df), 1e-300));
      r.order.push_back(p);
      if (std::abs(p - 2.0) > 0.5) r.order_ok = false;
    } else {
      r.order.push_back(std::numeric_limits<double>::quiet_NaN());
      if (std::abs(df) > floor) r.order_ok = false;
    }
  }

  // ground-state vectors: v_b ~ e^{iK} v_b~ up to a global phase
  Eigen::VectorXcd shifted(bf.unknowns());
  for (int p = 0; p < bf.unknowns(); ++p) shifted(p) = std::polar(1.0, bf.phase(p)) * etf.vectors[0](p);
  r.overlap = std::abs(ebf.vectors[0].dot(shifted)) / (ebf.vectors[0].norm() * shifted.norm());
  return r;
}

void sandwich_check(const FrameField& frame, BracketReport& rep, const StripGrid& grid_in, bool parallel) {
  const StripGrid grid = grid_in.n_s > 0 ? grid_in : StripGrid::for_problem(rep.a, rep.beta);
  StripSetup plus;
  plus.side = Side::plus;
  plus.parallel = parallel;
  StripSetup minus = plus;
  minus.side = Side::minus;
  const int n = rep.n;
  const StripEstimate ep = estimate_eigs(frame, Flux{rep.c0}, rep.a, rep.beta, grid, plus, n);
  const StripEstimate em = estimate_eigs(frame, Flux{rep.c0}, rep.a, rep.beta, grid, minus, n);
  rep.strip_checked = true;
  rep.grid_n_s = grid.n_s;
  rep.grid_n_u = grid.n_u;
  rep.kappa_plus = ep.value;
  rep.kappa_minus = em.value;
  rep.tol_plus = ep.tolerance;
  rep.tol_minus = em.tolerance;
  rep.lower_margin.clear();
  rep.upper_margin.clear();
  rep.order_margin.clear();
  rep.sandwich_ok = true;
  std::ostringstream diag;
  diag << std::setprecision(10);
  for (int j = 0; j < n; ++j) {
    rep.lower_margin.push_back(em.value[j] - rep.minus.tau[j] + em.tolerance[j]);
    rep.upper_margin.push_back(rep.plus.tau[j] + ep.tolerance[j] - ep.value[j]);
    rep.order_margin.push_back(ep.value[j] - em.value[j] + ep.tolerance[j] + em.tolerance[j]);
    if (rep.lower_margin[j] < 0.0 || rep.upper_margin[j] < 0.0 || rep.order_margin[j] < 0.0) {
      rep.sandwich_ok = false;
      diag << "j=" << j + 1 << " tau-=" << rep.minus.tau[j] << " kappa-=" << em.value[j] << "+-" << em.tolerance[j]
           << " kappa+=" << ep.value[j] << "+-" << ep.tolerance[j] << " tau+=" << rep.plus.tau[j] << "; ";
    }
  }
  rep.diagnostics = diag.str();
}

void write_matrix_market(const StripOperator& op, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << "% " << op.tag() << " beta=" << op.beta << " c0=" << op.c0 << " a=" << op.a << '\n';
  out << op.matrix.rows() << ' ' << op.matrix.cols() << ' ' << op.matrix.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int c = 0; c < op.matrix.outerSize(); ++c) {
    for (SparseMatrixC::InnerIterator it(op.matrix, c); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
}

}  // namespace abloop
