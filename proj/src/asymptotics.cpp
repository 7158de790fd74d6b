#include "abloop/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "abloop/error.hpp"

namespace abloop {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

void require_increasing(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw Error(ErrorKind::precondition, std::string(what) + " must be strictly increasing");
  }
}

struct PointResult {
  BracketReport bracket;
  bool skipped = false;
  std::string skip_reason;
};

PointResult evaluate_point(const FrameField& frame, double beta, double c0, const SweepOptions& opt) {
  PointResult pr;
  BracketConfig cfg;
  cfg.frame = &frame;
  cfg.flux = Flux{c0};
  cfg.beta = beta;
  cfg.a = opt.a;
  cfg.n = opt.n;
  cfg.upm.boundary = opt.boundary;
  cfg.upm.variant = opt.coeffs;
  pr.bracket = bracket(cfg);
  if (opt.strip) {
    try {
      sandwich_check(frame, pr.bracket, opt.grid);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::resolution && e.kind() != ErrorKind::convergence) throw;
      pr.skipped = true;
      pr.skip_reason = e.what();
    }
  }
  return pr;
}

// Evaluate independent sweep points concurrently; results land in index order.
std::vector<PointResult> evaluate_points(const FrameField& frame, const std::vector<double>& betas,
                                         const std::vector<double>& c0s, const SweepOptions& opt) {
  const int n = static_cast<int>(betas.size());
  std::vector<PointResult> out(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = evaluate_point(frame, betas[i], c0s[i], opt);
    } catch (...) {
#pragma omp critical(abloop_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

void append_records(SweepReport& rep, double param, const PointResult& pr) {
  const BracketReport& b = pr.bracket;
  const bool strip = b.strip_checked && !pr.skipped;
  for (int j = 0; j < b.n; ++j) {
    SweepRecord r;
    r.param = param;
    r.j = j + 1;
    r.beta = b.beta;
    r.c0 = b.c0;
    r.a = b.a;
    r.mu = b.mu[j];
    r.zeta_plus = b.plus.zeta.zeta;
    r.zeta_minus = b.minus.zeta.zeta;
    r.tau_plus = b.plus.tau[j];
    r.tau_minus = b.minus.tau[j];
    r.kappa_plus = strip ? b.kappa_plus[j] : nan_v;
    r.kappa_minus = strip ? b.kappa_minus[j] : nan_v;
    r.tolerance = strip ? b.tol_plus[j] + b.tol_minus[j] : nan_v;
    r.lambda_mid = strip ? 0.5 * (r.kappa_plus + r.kappa_minus) : 0.5 * (r.tau_plus + r.tau_minus);
    r.err = std::abs(r.lambda_mid + 0.25 * b.beta * b.beta - r.mu);
    r.regime_flags = b.regime_flags();
    if (pr.skipped) r.regime_flags += "|skipped";
    r.skipped = pr.skipped;
    r.current = nan_v;
    rep.records.push_back(r);
  }
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

}  // namespace

EnvelopeFit fit_envelope(const std::vector<double>& betas, const std::vector<double>& errors) {
  EnvelopeFit f;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (errors[i] > 0.0 && betas[i] > 1.0) {
      x.push_back(std::log(std::log(betas[i]) / betas[i]));
      y.push_back(std::log(errors[i]));
      f.envelope_max = std::max(f.envelope_max, errors[i] * betas[i] / std::log(betas[i]));
    }
  }
  if (x.size() < 2) return f;
  f.fitted = true;
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = y[i] - x[i];
  const double logC = mean(r);
  f.C = std::exp(logC);
  double ss = 0.0;
  for (double v : r) ss += (v - logC) * (v - logC);
  f.residual = std::sqrt(ss / r.size());

  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  f.exponent = sxy / sxx;
  const double lc = my - f.exponent * mx;
  f.power_C = std::exp(lc);
  ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - lc - f.exponent * x[i];
    ss += d * d;
  }
  f.power_residual = std::sqrt(ss / x.size());
  return f;
}

SweepReport beta_sweep(const FrameField& frame, Flux flux, const std::vector<double>& betas, const SweepOptions& opt) {
  require_increasing(betas, "beta axis");
  SweepReport rep;
  rep.axis = SweepReport::Axis::beta;
  rep.curve_label = frame.label();
  rep.n = opt.n;
  rep.boundary = opt.boundary;
  rep.coeffs = opt.coeffs;
  rep.fixed = flux.c0;
  rep.axis_values = betas;
  const std::vector<PointResult> pts =
      evaluate_points(frame, betas, std::vector<double>(betas.size(), flux.c0), opt);
  std::vector<double> fb, fe;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    append_records(rep, betas[i], pts[i]);
    rep.brackets.push_back(pts[i].bracket);
    if (pts[i].skipped) {
      rep.notes.push_back("beta=" + std::to_string(betas[i]) + " skipped: " + pts[i].skip_reason);
      continue;
    }
    if (pts[i].bracket.strip_checked) {
      rep.sandwich_ok = rep.sandwich_ok && pts[i].bracket.sandwich_ok;
      for (int j = 0; j < opt.n; ++j) rep.max_tolerance = std::max(rep.max_tolerance, pts[i].bracket.tol_plus[j] + pts[i].bracket.tol_minus[j]);
      if (!pts[i].bracket.sandwich_ok) rep.notes.push_back("sandwich: " + pts[i].bracket.diagnostics);
    }
    fb.push_back(betas[i]);
    fe.push_back(rep.records[rep.records.size() - opt.n].err);
  }
  rep.monotone = fe.size() >= 2;
  for (std::size_t i = 1; i < fe.size(); ++i) rep.monotone = rep.monotone && fe[i] < fe[i - 1];
  if (fe.size() >= 2) {
    rep.fit = fit_envelope(fb, fe);
  } else {
    rep.notes.push_back("fewer than two points: no envelope fit");
  }
  rep.pass = rep.sandwich_ok && rep.monotone && rep.fit.fitted && rep.fit.exponent >= 0.9 &&
             rep.fit.power_residual <= std::log(1.25) && fb.size() == betas.size();
  return rep;
}

SweepReport flux_sweep(const FrameField& frame, double beta, const std::vector<double>& c0s, const SweepOptions& opt) {
  require_increasing(c0s, "flux axis");
  for (double c : c0s) {
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::precondition, "flux values must lie in (0, 1)");
  }
  SweepReport rep;
  rep.axis = SweepReport::Axis::flux;
  rep.curve_label = frame.label();
  rep.n = opt.n;
  rep.boundary = opt.boundary;
  rep.coeffs = opt.coeffs;
  rep.fixed = beta;
  rep.axis_values = c0s;
  const std::vector<PointResult> pts = evaluate_points(frame, std::vector<double>(c0s.size(), beta), c0s, opt);
  for (std::size_t i = 0; i < c0s.size(); ++i) {
    append_records(rep, c0s[i], pts[i]);
    rep.brackets.push_back(pts[i].bracket);
    if (pts[i].skipped) rep.notes.push_back("c0=" + std::to_string(c0s[i]) + " skipped: " + pts[i].skip_reason);
    if (pts[i].bracket.strip_checked && !pts[i].skipped) {
      rep.sandwich_ok = rep.sandwich_ok && pts[i].bracket.sandwich_ok;
      for (int j = 0; j < opt.n; ++j) rep.max_tolerance = std::max(rep.max_tolerance, pts[i].bracket.tol_plus[j] + pts[i].bracket.tol_minus[j]);
    }
  }
  const int m = static_cast<int>(c0s.size());
  if (m == 0) return rep;
  // currents per mode: central differences inside, one-sided at the ends
  for (int j = 0; j < opt.n; ++j) {
    auto lam = [&](int i) { return rep.records[static_cast<std::size_t>(i) * opt.n + j].lambda_mid; };
    double lo = lam(0), hi = lam(0);
    for (int i = 0; i < m; ++i) {
      lo = std::min(lo, lam(i));
      hi = std::max(hi, lam(i));
      double cur = nan_v;
      if (m >= 2) {
        const int l = std::max(i - 1, 0), r = std::min(i + 1, m - 1);
        cur = (lam(r) - lam(l)) / (c0s[r] - c0s[l]);
      }
      rep.records[static_cast<std::size_t>(i) * opt.n + j].current = cur;
    }
    if (j == 0) rep.variation = hi - lo;
  }
  // oddness of I_1 about 1/2
  bool symmetric = m >= 2;
  for (int i = 0; i < m && symmetric; ++i) symmetric = std::abs(c0s[i] + c0s[m - 1 - i] - 1.0) < 1e-12;
  double imax = 0.0, odd = 0.0;
  for (int i = 0; i < m; ++i) {
    const double I = rep.records[static_cast<std::size_t>(i) * opt.n].current;
    imax = std::max(imax, std::abs(I));
    if (symmetric) odd = std::max(odd, std::abs(I + rep.records[static_cast<std::size_t>(m - 1 - i) * opt.n].current));
  }
  rep.oddness = symmetric && imax > 0.0 ? odd / imax : nan_v;
  if (!symmetric) rep.notes.push_back("flux grid not symmetric about 1/2: oddness not assessed");
  const double tol = opt.strip ? rep.max_tolerance : 0.0;
  rep.pass = rep.variation > 10.0 * tol && rep.variation > 0.0 && (!symmetric || rep.oddness <= 0.05);
  return rep;
}

}  // namespace abloop
