#pragma once

#include <string>
#include <vector>

#include "abloop/curve.hpp"
#include "abloop/spectral1d.hpp"
#include "abloop/transverse.hpp"
#include "abloop/types.hpp"

namespace abloop {

struct HalfwidthSchedule {
  double a = 0.0;
  double raw = 0.0;      // 6 ln(beta) / beta
  double limit = 0.0;    // min(a1, 0.99 / (2 gamma_plus)), or +inf without a frame
  bool clamped = false;
};

/// a(beta) = 6 ln(beta) / beta, clamped below the geometric limit of the frame when one is given.
HalfwidthSchedule halfwidth_schedule(double beta, const FrameField* frame = nullptr);

struct BracketConfig {
  const FrameField* frame = nullptr;
  Flux flux;
  double beta = 0.0;
  double a = 0.0;  // 0: halfwidth_schedule(beta, frame)
  int n = 1;
  UpmOptions upm;
};

/// One side of the decoupled operator U+- (x) 1 + 1 (x) T+-.
struct TauResult {
  Side side = Side::plus;
  TransverseResult zeta;
  bool zeta_from_oracle = false;  // secular root unavailable outside the regime
  UpmResult upm;
  std::vector<double> tau;        // zeta + mu_j^{+-}
  double xi2 = 0.0;               // second transverse eigenvalue (grid oracle)
  double first_excluded = 0.0;    // xi2 + mu_1^{+-}
  bool ordering_certified = false;  // tau_n <= first_excluded
};

TauResult tau(const BracketConfig& config, Side side);

struct BracketReport {
  double beta = 0.0;
  double c0 = 0.0;
  double a = 0.0;
  bool a_clamped = false;
  int n = 0;
  std::vector<double> mu;
  TauResult plus;
  TauResult minus;
  std::vector<double> err_plus;   // tau+_j + beta^2/4 - mu_j
  std::vector<double> err_minus;

  // filled by sandwich_check
  bool strip_checked = false;
  int grid_n_s = 0;
  int grid_n_u = 0;
  std::vector<double> kappa_plus;
  std::vector<double> kappa_minus;
  std::vector<double> tol_plus;
  std::vector<double> tol_minus;
  std::vector<double> lower_margin;  // kappa-_j - tau-_j + tol
  std::vector<double> upper_margin;  // tau+_j + tol - kappa+_j
  std::vector<double> order_margin;  // kappa+_j - kappa-_j + tol
  bool sandwich_ok = false;
  std::string diagnostics;

  std::string regime_flags() const;
};

BracketReport bracket(const BracketConfig& config);

struct Est1Options {
  std::vector<double> c0_grid = {0.1, 0.25, 0.5, 0.75, 0.9};
  std::vector<int> modes = {1, 2};
  UpmOptions upm;
  double min_slope = 0.9;
};

struct Est1Row {
  double c0 = 0.0;
  int j = 0;
  Side side = Side::plus;
  std::vector<double> deviation;  // |mu_j^{+-}(a) - mu_j|
  double slope = 0.0;             // least squares in log-log
  double C = 0.0;                 // max deviation / a
};

struct Est1Result {
  std::vector<double> a_list;
  std::vector<Est1Row> rows;
  double min_slope = 0.0;
  double C_max = 0.0;
  bool pass = false;
};

Est1Result check_est1(const FrameField& frame, const std::vector<double>& a_list, const Est1Options& options = {});

struct Est2Side {
  bool skipped = true;  // hypotheses unmet
  double zeta = 0.0;
  double gap = 0.0;                   // zeta + beta^2/4, free of cancellation
  double lower_margin = 0.0;          // with exp(-beta a / 2)
  double upper_margin = 0.0;
  double printed_lower_margin = 0.0;  // with exp(-beta / 2)
  double printed_upper_margin = 0.0;
  int negative_count = -1;
  bool holds = false;                 // margins > 0 with exp(-beta a / 2) and one negative eigenvalue
  bool printed_holds = false;
};

struct Est2Result {
  double beta = 0.0;
  double a = 0.0;
  double gamma_plus = 0.0;
  Est2Side plus;
  Est2Side minus;
  bool pass = false;  // every non-skipped side holds
};

/// Two-sided bounds on the transverse ground state.
///   plus:  -beta^2/4 < zeta+ < -beta^2/4 + 2 beta^2 exp(-beta a/2)
///   minus: -beta^2/4 - (2205/16) beta^2 exp(-beta a/2) < zeta- < -beta^2/4
/// The same chains with exp(-beta/2) are reported as printed_*.
Est2Result check_est2(double beta, double a, double gamma_plus);

}  // namespace abloop
