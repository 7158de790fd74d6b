#include "abloop/spectral1d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "abloop/error.hpp"

namespace abloop {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Fourier coefficients q_m, -n/2 < m < n/2, of the trigonometric interpolant of the samples.
std::vector<cd> potential_coefficients(const std::vector<double>& q) {
  const int n = static_cast<int>(q.size());
  Eigen::FFT<double> fft;
  std::vector<cd> bins;
  fft.fwd(bins, q);
  for (auto& b : bins) b /= static_cast<double>(n);
  if (n % 2 == 0) bins[n / 2] *= 0.5;  // split Nyquist symmetrically
  return bins;
}

cd coefficient(const std::vector<cd>& bins, int m) {
  const int n = static_cast<int>(bins.size());
  if (2 * std::abs(m) > n) return {0.0, 0.0};
  if (2 * std::abs(m) == n) return bins[n / 2];
  return bins[m >= 0 ? m : m + n];
}

bool resolved_spectrally(const std::vector<cd>& bins) {
  const int n = static_cast<int>(bins.size());
  double peak = 0.0, tail = 0.0;
  for (int i = 0; i < n; ++i) {
    const int m = i <= n / 2 ? i : n - i;
    const double v = std::abs(bins[i]);
    if (m > 0) peak = std::max(peak, v);
    if (4 * m >= n) tail = std::max(tail, v);
  }
  double mean = std::abs(bins[0]);
  return tail <= 1e-10 * std::max({peak, mean, 1.0});
}

SpectralResult dense_hermitian(const Eigen::MatrixXcd& H, int modes, bool want_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, want_vectors ? Eigen::ComputeEigenvectors
                                                                     : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::convergence, "dense Hermitian eigensolver failed");
  SpectralResult r;
  r.size = static_cast<int>(H.rows());
  const int k = std::min<int>(modes, static_cast<int>(H.rows()));
  for (int i = 0; i < k; ++i) {
    r.eigenvalues.push_back(es.eigenvalues()(i));
    if (want_vectors) {
      const Eigen::VectorXcd v = es.eigenvectors().col(i);
      r.eigenvectors.push_back(v);
      r.residuals.push_back((H * v - es.eigenvalues()(i) * v).norm());
    } else {
      r.residuals.push_back(0.0);
    }
  }
  return r;
}

SpectralResult solve_fourier(const LongitudinalProblem& p, const std::vector<cd>& qhat) {
  const int nb = p.basis_size;
  const double omega = 2.0 * kPi / p.length;
  const double shift = p.boundary == FluxBoundary::twisted ? p.c0 : 0.0;
  Eigen::MatrixXcd H(nb, nb);
  const int kmin = -nb / 2;
  for (int a = 0; a < nb; ++a) {
    for (int b = 0; b < nb; ++b) H(a, b) = coefficient(qhat, a - b);
    const double wave = omega * (kmin + a - shift);
    H(a, a) += p.stiffness * wave * wave;
  }
  SpectralResult r = dense_hermitian(H, p.modes, p.want_vectors);
  r.method = "fourier-galerkin";
  return r;
}

SpectralResult solve_finite_difference(const LongitudinalProblem& p) {
  const int n = static_cast<int>(p.potential.size());
  const double h = p.length / n;
  const double off = -p.stiffness / (h * h);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    H(i, i) = 2.0 * p.stiffness / (h * h) + p.potential[i];
    if (i + 1 < n) {
      H(i, i + 1) = off;
      H(i + 1, i) = off;
    }
  }
  // u_n = tau u_0 closes the ring
  const cd tau = p.boundary == FluxBoundary::twisted ? std::polar(1.0, -2.0 * kPi * p.c0) : cd(1.0, 0.0);
  H(n - 1, 0) += off * tau;
  H(0, n - 1) += off * std::conj(tau);
  SpectralResult r = dense_hermitian(H, p.modes, p.want_vectors);
  r.method = "finite-difference";
  return r;
}

}  // namespace

SpectralResult solve_longitudinal(const LongitudinalProblem& p, LongitudinalMethod method) {
  if (!(p.stiffness > 0.0)) throw Error(ErrorKind::precondition, "longitudinal stiffness must be positive");
  if (!(p.length > 0.0)) throw Error(ErrorKind::precondition, "longitudinal length must be positive");
  if (p.potential.size() < 4) throw Error(ErrorKind::precondition, "potential needs at least 4 samples");
  if (p.modes < 1 || p.basis_size < p.modes) throw Error(ErrorKind::precondition, "basis smaller than mode count");

  if (method == LongitudinalMethod::finite_difference) return solve_finite_difference(p);
  const auto qhat = potential_coefficients(p.potential);
  if (method == LongitudinalMethod::automatic && !resolved_spectrally(qhat)) {
    SpectralResult r = solve_finite_difference(p);
    r.fallback = true;
    return r;
  }
  return solve_fourier(p, qhat);
}

namespace {

std::vector<double> sampled_curvature_potential(const FrameField& frame, int n, double shift) {
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) {
    const double g = frame.gamma(frame.length() * i / n);
    q[i] = -0.25 * g * g + shift;
  }
  return q;
}

}  // namespace

std::vector<double> solve_comparison(const FrameField& frame, Flux flux, int n, const ComparisonOptions& opt) {
  LongitudinalProblem p;
  p.length = frame.length();
  p.stiffness = 1.0;
  p.potential = sampled_curvature_potential(frame, opt.n_potential, 0.0);
  p.boundary = opt.boundary;
  p.c0 = flux.c0;
  p.modes = n;
  p.basis_size = opt.basis_size;
  return solve_longitudinal(p).eigenvalues;
}

UpmResult solve_U_pm(const FrameField& frame, Flux flux, double a, Side side, int n, const UpmOptions& opt) {
  CoeffBoundsOptions bo;
  bo.boundary = opt.boundary;
  bo.variant = opt.variant;
  bo.n_u = opt.bounds_n_u;
  bo.n_s = opt.bounds_n_s;
  const CoeffBounds b = coeff_bounds(frame, flux, a, bo);
  return solve_U_pm(frame, flux, a, side, n, b, opt);
}

UpmResult solve_U_pm(const FrameField& frame, Flux flux, double a, Side side, int n, const CoeffBounds& b,
                     const UpmOptions& opt) {
  const double gp = b.gamma_plus;
  if (!(a > 0.0) || (gp > 0.0 && a >= 0.5 / gp)) {
    throw Error(ErrorKind::precondition, "U+- needs 0 < a < 1/(2 gamma_+)");
  }
  UpmResult r;
  r.N = b.N;
  r.M = b.M;
  if (side == Side::plus) {
    r.stiffness = 1.0 / ((1.0 - a * gp) * (1.0 - a * gp)) + 0.5 * b.N;
    r.shift = 0.5 * b.N + b.M;
  } else {
    r.stiffness = 1.0 / ((1.0 + a * gp) * (1.0 + a * gp)) - 0.5 * b.N;
    r.shift = -0.5 * b.N - b.M;
  }
  if (!(r.stiffness > 0.0)) {
    throw Error(ErrorKind::precondition, "U- stiffness (1 + a g+)^-2 - N/2 is not positive; N too large");
  }
  LongitudinalProblem p;
  p.length = frame.length();
  p.stiffness = r.stiffness;
  p.potential = sampled_curvature_potential(frame, opt.n_potential, r.shift);
  p.boundary = opt.boundary;
  p.c0 = flux.c0;
  p.modes = n;
  p.basis_size = opt.basis_size;
  r.mu = solve_longitudinal(p).eigenvalues;
  return r;
}

}  // namespace abloop
