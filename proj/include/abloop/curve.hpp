#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abloop/types.hpp"

namespace abloop {

/// A closed loop given by its signed curvature as a function of arc length.
///
/// Fourier data is laid out as [a0, a1, b1, a2, b2, ...] with
///   gamma(s) = a0 + sum_k a_k cos(2 pi k s / L) + b_k sin(2 pi k s / L).
/// Sample data holds gamma at s_i = i L / n, i = 0..n-1.
struct CurveSpec {
  enum class Kind { samples, fourier };

  double length = 0.0;
  Kind kind = Kind::fourier;
  std::vector<double> data;
  std::string label;

  /// Counter-clockwise circle of the given radius (gamma = -1/R under the loop's sign convention).
  static CurveSpec circle(double radius = 1.0);
  /// gamma(s) = -1 + eps cos(2s) on L = 2 pi.
  static CurveSpec perturbed_circle(double eps);

  static CurveSpec parse_json(const std::string& text);
  static CurveSpec load(const std::string& path);
  std::string to_json() const;
};

/// Geometry of the loop at one arc-length position.
struct FramePoint {
  double s = 0.0;
  double gamma = 0.0;
  double dgamma = 0.0;
  double d2gamma = 0.0;
  double H = 0.0;   // tangent angle, H(s) = -int_0^s gamma
  double x = 0.0;   // Gamma_1(s)
  double y = 0.0;   // Gamma_2(s)
  double tx = 0.0;  // Gamma_1'(s) = cos H
  double ty = 0.0;  // Gamma_2'(s) = sin H
};

/// (s, u) coordinates in the tubular neighbourhood of halfwidth a.
struct StripPoint {
  double s = 0.0;
  double u = 0.0;
  double a = 0.0;
};

struct FrameOptions {
  int n_samples = 2048;
  double closure_tol = 1e-10;
  /// Position of the loop's arc-length centroid relative to the solenoid.
  double offset_x = 0.0;
  double offset_y = 0.0;
};

/// Arc-length frame reconstructed from curvature data. Immutable after build().
///
/// Positions are the spectral antiderivative of exp(iH), so Gamma' = (cos H, sin H)
/// holds to rounding and the frame is exactly arc-length parametrised.
class FrameField {
 public:
  static FrameField build(const CurveSpec& spec, int n_samples);
  static FrameField build(const CurveSpec& spec, const FrameOptions& options);

  FramePoint at(double s) const;
  double gamma(double s) const;
  double dgamma(double s) const;
  double d2gamma(double s) const;
  double tangent_angle(double s) const;

  double length() const { return length_; }
  const std::string& label() const { return label_; }
  /// max |gamma| over the sample grid.
  double gamma_plus() const { return gamma_plus_; }
  /// Largest admissible strip halfwidth: 0.99 min(1/gamma_+, dist(Gamma, 0)).
  double a1() const { return a1_; }
  /// int_0^L gamma ds; -2 pi for a counter-clockwise loop.
  double total_curvature() const { return total_curvature_; }
  /// |Gamma(L) - Gamma(0)|.
  double closure_residual() const { return closure_residual_; }
  /// +1 counter-clockwise, -1 clockwise.
  int orientation() const { return orientation_; }
  /// Winding number of the loop around the solenoid.
  int winding() const { return winding_; }
  /// Largest mismatch between gamma and Gamma_1''Gamma_2' - Gamma_2''Gamma_1' at the 5 check points.
  double convention_residual() const { return convention_residual_; }
  double min_distance_to_origin() const { return min_dist_; }

  int n_samples() const { return static_cast<int>(s_.size()); }
  const std::vector<double>& s_samples() const { return s_; }
  const std::vector<double>& gamma_samples() const { return gamma_s_; }
  const std::vector<double>& dgamma_samples() const { return dgamma_s_; }
  const std::vector<double>& d2gamma_samples() const { return d2gamma_s_; }
  const std::vector<double>& H_samples() const { return H_s_; }
  const std::vector<double>& x_samples() const { return x_s_; }
  const std::vector<double>& y_samples() const { return y_s_; }

 private:
  FrameField() = default;

  double length_ = 0.0;
  std::string label_;
  double omega_ = 0.0;  // 2 pi / L

  // curvature: gamma(s) = mean + sum_k cos_[k] cos(k omega s) + sin_[k] sin(k omega s), k >= 1
  double gamma_mean_ = 0.0;
  std::vector<double> gamma_cos_;
  std::vector<double> gamma_sin_;

  // exp(iH(s)) = sum_j tangent_coef_[j] exp(i tangent_k_[j] omega s)
  std::vector<int> tangent_k_;
  std::vector<std::complex<double>> tangent_coef_;
  std::complex<double> position_offset_;
  std::complex<double> tangent_mean_;

  double gamma_plus_ = 0.0;
  double a1_ = 0.0;
  double total_curvature_ = 0.0;
  double closure_residual_ = 0.0;
  int orientation_ = 1;
  int winding_ = 0;
  double convention_residual_ = 0.0;
  double min_dist_ = 0.0;

  std::vector<double> s_, gamma_s_, dgamma_s_, d2gamma_s_, H_s_, x_s_, y_s_;
};

struct StripMapResult {
  double x = 0.0;
  double y = 0.0;
  double jacobian = 1.0;  // 1 + u gamma(s)
  bool near_degenerate = false;
};

struct Omega {
  double omega1 = 0.0;
  double omega2 = 0.0;
};

// Point checks. All coefficient functions require a <= a1 and |u| <= a.
void check_strip_point(const FrameField& frame, const StripPoint& p);

/// Psi_a(s, u) = Gamma(s) + u n(s), n = (-Gamma_2', Gamma_1').
StripMapResult strip_map(const FrameField& frame, const StripPoint& p);

/// theta(s, u) = 1 / |Psi_a(s, u)|^2.
double theta(const FrameField& frame, const StripPoint& p);
double theta(const FramePoint& g, double u);

Omega omega(const FrameField& frame, const StripPoint& p, CoeffVariant variant = CoeffVariant::derived);
Omega omega(const FramePoint& g, double u, CoeffVariant variant = CoeffVariant::derived);

/// Curvature-induced potential of the curvilinear Laplacian.
double effective_potential(const FrameField& frame, const StripPoint& p);
double effective_potential(const FramePoint& g, double u);

/// K(s, u) = int_0^u c0 Omega_2(s, v) dv by adaptive Gauss-Kronrod quadrature.
double gauge_phase(const FrameField& frame, Flux flux, const StripPoint& p,
                   CoeffVariant variant = CoeffVariant::derived);
double gauge_phase(const FramePoint& g, double c0, double u, CoeffVariant variant = CoeffVariant::derived);

/// K(s, u_j) for ascending u_j containing 0, accumulated outward from u = 0 by Gauss-Kronrod
/// on each grid interval.
std::vector<double> phase_column(const FramePoint& g, double c0, const std::vector<double>& u,
                                 CoeffVariant variant = CoeffVariant::derived);

/// dK/ds by a 5-point centered difference of gauge_phase on spacing L / n_samples.
double gauge_phase_ds(const FrameField& frame, Flux flux, const StripPoint& p,
                      CoeffVariant variant = CoeffVariant::derived);

/// Circulation density of the gauge field along the loop, c0 Omega_1(s, 0).
/// Integrates to -2 pi c0 * winding over one period.
double circulation_density(const FramePoint& g, double c0);

struct CoeffBounds {
  double gamma_plus = 0.0;
  double N = 0.0;
  double M = 0.0;
  std::vector<double> s;  // grid used for the maxima
  std::vector<double> u;
  Eigen::MatrixXd W;      // W(s_i, u_j)
  Eigen::MatrixXd first_order;  // first-order s coefficient (the quantity inside N)
};

struct CoeffBoundsOptions {
  FluxBoundary boundary = FluxBoundary::twisted;
  CoeffVariant variant = CoeffVariant::derived;
  int n_s = 0;   // 0: the frame's sample grid
  int n_u = 33;
};

/// N_c0(a) and M_c0(a): maxima of the first-order s coefficient and |W + gamma^2/4| over the strip.
///
/// With FluxBoundary::twisted the circulation density is removed from K_s before the maxima are
/// taken, matching longitudinal problems posed with the twisted boundary condition.
CoeffBounds coeff_bounds(const FrameField& frame, Flux flux, double a, const CoeffBoundsOptions& options = {});

}  // namespace abloop
