#pragma once

#include <string>
#include <vector>

#include "abloop/bracketing.hpp"
#include "abloop/curve.hpp"
#include "abloop/strip2d.hpp"
#include "abloop/types.hpp"

namespace abloop {

struct SweepOptions {
  int n = 1;
  FluxBoundary boundary = FluxBoundary::twisted;
  CoeffVariant coeffs = CoeffVariant::derived;
  bool strip = true;     // compute kappa+- on the strip
  StripGrid grid{0, 0};  // n_s == 0: StripGrid::for_problem per point
  double a = 0.0;        // 0: halfwidth schedule
};

/// One (parameter, j) row.
struct SweepRecord {
  double param = 0.0;
  int j = 0;
  double beta = 0.0;
  double c0 = 0.0;
  double a = 0.0;
  double mu = 0.0;
  double zeta_plus = 0.0;
  double zeta_minus = 0.0;
  double tau_plus = 0.0;
  double tau_minus = 0.0;
  double kappa_plus = 0.0;   // NaN without strip
  double kappa_minus = 0.0;
  double tolerance = 0.0;    // tol+ + tol-
  double err = 0.0;          // |lambda_mid + beta^2/4 - mu|
  double lambda_mid = 0.0;   // (kappa+ + kappa-)/2, or (tau+ + tau-)/2 without strip
  double current = 0.0;      // d lambda_mid / d c0 (flux sweeps)
  std::string regime_flags;
  bool skipped = false;
};

/// Least-squares fits of e(beta) in log space.
///   constant: log(e beta / ln beta) = log C
///   power:    log e = log C_p + p log(ln beta / beta)
struct EnvelopeFit {
  bool fitted = false;
  double C = 0.0;
  double residual = 0.0;        // RMS log residual of the constant fit
  double exponent = 0.0;        // p
  double power_C = 0.0;
  double power_residual = 0.0;  // RMS log residual of the power fit
  double envelope_max = 0.0;    // max e beta / ln beta
};

EnvelopeFit fit_envelope(const std::vector<double>& betas, const std::vector<double>& errors);

struct SweepReport {
  enum class Axis { beta, flux };
  Axis axis = Axis::beta;
  std::string curve_label;
  int n = 1;
  FluxBoundary boundary = FluxBoundary::twisted;
  CoeffVariant coeffs = CoeffVariant::derived;
  double fixed = 0.0;  // c0 for beta sweeps, beta for flux sweeps
  std::vector<double> axis_values;
  std::vector<SweepRecord> records;
  std::vector<BracketReport> brackets;

  EnvelopeFit fit;
  bool monotone = false;
  bool sandwich_ok = true;
  double variation = 0.0;
  double max_tolerance = 0.0;
  double oddness = 0.0;  // max |I(c) + I(1-c)| / max |I|
  bool pass = false;
  std::vector<std::string> notes;
};

/// Pass rule: sandwich within tolerance at every point, e_1 strictly decreasing, power fit with
/// exponent >= 0.9 (decay at least as fast as ln(beta)/beta) and RMS log residual <= ln 1.25.
SweepReport beta_sweep(const FrameField& frame, Flux flux, const std::vector<double>& betas, const SweepOptions& options = {});

/// Pass rule: variation of lambda_mid over the grid > 10 x the largest bracket tolerance and, when
/// the grid is symmetric about 1/2, |I(c) + I(1-c)| <= 5% of max |I|.
SweepReport flux_sweep(const FrameField& frame, double beta, const std::vector<double>& c0s, const SweepOptions& options = {});

/// Writes <dir>/<basename>.csv and, for non-empty sweeps, <dir>/<basename>.svg.
void emit_report(const SweepReport& report, const std::string& dir, const std::string& basename);

/// CSV text of a report (header only for an empty sweep).
std::string report_csv(const SweepReport& report);

/// Standalone SVG line plot, 1000 x 700.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<PlotSeries>& series, bool logx, bool logy);

}  // namespace abloop
