#include "abloop/bracketing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "abloop/error.hpp"

namespace abloop {

HalfwidthSchedule halfwidth_schedule(double beta, const FrameField* frame) {
  if (!(beta > 1.0)) throw Error(ErrorKind::precondition, "halfwidth schedule needs beta > 1");
  HalfwidthSchedule h;
  h.raw = 6.0 * std::log(beta) / beta;
  h.limit = std::numeric_limits<double>::infinity();
  if (frame != nullptr) {
    h.limit = frame->a1();
    if (frame->gamma_plus() > 0.0) h.limit = std::min(h.limit, 0.99 / (2.0 * frame->gamma_plus()));
  }
  h.a = h.raw;
  if (h.a > h.limit) {
    h.a = h.limit;
    h.clamped = true;
  }
  return h;
}

namespace {

double resolve_a(const BracketConfig& c) {
  if (c.frame == nullptr) throw Error(ErrorKind::precondition, "bracket config without frame");
  if (!(c.beta > 0.0)) throw Error(ErrorKind::precondition, "bracket config needs beta > 0");
  if (c.n < 1) throw Error(ErrorKind::precondition, "bracket config needs n >= 1");
  return c.a > 0.0 ? c.a : halfwidth_schedule(c.beta, c.frame).a;
}

}  // namespace

TauResult tau(const BracketConfig& c, Side side) {
  const double a = resolve_a(c);
  const FrameField& fr = *c.frame;
  TauResult r;
  r.side = side;
  const TransverseProblem tp{a, c.beta, side, side == Side::plus ? 0.0 : fr.gamma_plus()};
  const SpectralResult oracle = transverse_grid_oracle(tp, transverse_grid_for(tp, 0.05), 2);
  try {
    r.zeta = transverse_secular(tp);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::root_bracketing) throw;
    r.zeta.zeta = oracle.eigenvalues.at(0);
    r.zeta.kappa = r.zeta.zeta < 0.0 ? std::sqrt(-r.zeta.zeta) : 0.0;
    r.zeta.in_regime = transverse_in_regime(tp);
    r.zeta_from_oracle = true;
  }
  r.xi2 = oracle.eigenvalues.at(1);
  r.upm = solve_U_pm(fr, c.flux, a, side, c.n, c.upm);
  r.tau.resize(c.n);
  for (int j = 0; j < c.n; ++j) r.tau[j] = r.zeta.zeta + r.upm.mu[j];
  r.first_excluded = r.xi2 + r.upm.mu[0];
  r.ordering_certified = r.tau.back() <= r.first_excluded;
  return r;
}

std::string BracketReport::regime_flags() const {
  std::string f;
  auto add = [&](const char* s) {
    if (!f.empty()) f += '|';
    f += s;
  };
  add(plus.zeta.in_regime ? "est2+" : "out+");
  add(minus.zeta.in_regime ? "est2-" : "out-");
  if (a_clamped) add("clamped");
  if (!plus.ordering_certified || !minus.ordering_certified) add("uncertified");
  if (strip_checked) add(sandwich_ok ? "sandwich" : "sandwich-fail");
  return f;
}

BracketReport bracket(const BracketConfig& c) {
  BracketReport r;
  r.beta = c.beta;
  r.c0 = c.flux.c0;
  r.n = c.n;
  if (c.a > 0.0) {
    r.a = c.a;
  } else {
    const HalfwidthSchedule h = halfwidth_schedule(c.beta, c.frame);
    r.a = h.a;
    r.a_clamped = h.clamped;
  }
  BracketConfig cc = c;
  cc.a = r.a;
  ComparisonOptions co;
  co.boundary = c.upm.boundary;
  co.basis_size = c.upm.basis_size;
  co.n_potential = c.upm.n_potential;
  r.mu = solve_comparison(*c.frame, c.flux, c.n, co);
  r.plus = tau(cc, Side::plus);
  r.minus = tau(cc, Side::minus);
  const double q = c.beta * c.beta / 4.0;
  for (int j = 0; j < c.n; ++j) {
    r.err_plus.push_back(r.plus.tau[j] + q - r.mu[j]);
    r.err_minus.push_back(r.minus.tau[j] + q - r.mu[j]);
  }
  return r;
}

namespace {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

Est1Result check_est1(const FrameField& frame, const std::vector<double>& a_list, const Est1Options& opt) {
  if (a_list.size() < 2) throw Error(ErrorKind::precondition, "EST1 fit needs at least two halfwidths");
  const double amax = frame.gamma_plus() > 0.0 ? 1.0 / (2.0 * frame.gamma_plus()) : frame.a1();
  for (double a : a_list) {
    if (!(a > 0.0) || a >= amax || a > frame.a1()) throw Error(ErrorKind::precondition, "EST1 halfwidth outside (0, 1/(2 gamma_plus))");
  }
  const int nmax = *std::max_element(opt.modes.begin(), opt.modes.end());
  Est1Result res;
  res.a_list = a_list;
  res.min_slope = std::numeric_limits<double>::infinity();
  ComparisonOptions co;
  co.boundary = opt.upm.boundary;
  co.basis_size = opt.upm.basis_size;
  co.n_potential = opt.upm.n_potential;
  for (double c0 : opt.c0_grid) {
    const std::vector<double> mu = solve_comparison(frame, Flux{c0}, nmax, co);
    CoeffBoundsOptions bo;
    bo.boundary = opt.upm.boundary;
    bo.variant = opt.upm.variant;
    bo.n_u = opt.upm.bounds_n_u;
    bo.n_s = opt.upm.bounds_n_s;
    std::vector<CoeffBounds> bounds;
    for (double a : a_list) bounds.push_back(coeff_bounds(frame, Flux{c0}, a, bo));
    for (Side side : {Side::plus, Side::minus}) {
      std::vector<std::vector<double>> dev(opt.modes.size());
      for (std::size_t i = 0; i < a_list.size(); ++i) {
        const UpmResult u = solve_U_pm(frame, Flux{c0}, a_list[i], side, nmax, bounds[i], opt.upm);
        for (std::size_t m = 0; m < opt.modes.size(); ++m) {
          const int j = opt.modes[m] - 1;
          dev[m].push_back(std::abs(u.mu[j] - mu[j]));
        }
      }
      for (std::size_t m = 0; m < opt.modes.size(); ++m) {
        Est1Row row;
        row.c0 = c0;
        row.j = opt.modes[m];
        row.side = side;
        row.deviation = dev[m];
        row.slope = loglog_slope(a_list, dev[m]);
        for (std::size_t i = 0; i < a_list.size(); ++i) row.C = std::max(row.C, dev[m][i] / a_list[i]);
        res.min_slope = std::min(res.min_slope, row.slope);
        res.C_max = std::max(res.C_max, row.C);
        res.rows.push_back(std::move(row));
      }
    }
  }
  res.pass = res.min_slope >= opt.min_slope && std::isfinite(res.C_max);
  return res;
}

namespace {

// zeta + beta^2/4 = -(kappa - beta/2)(kappa + beta/2), with kappa - beta/2 rewritten through the
// secular equation so the exponentially small gap survives in double precision
double est2_gap(double kappa, double beta, double a, double g, Side side) {
  double d = 0.0;
  if (side == Side::plus) {
    d = -2.0 * kappa / std::expm1(2.0 * kappa * a);
  } else {
    const double tau = 2.0 / (std::exp(2.0 * kappa * a) + 1.0);  // 1 - tanh(kappa a)
    d = tau * (2.0 * kappa * kappa + g * beta) / (2.0 * (kappa - g));
  }
  return -d * (kappa + 0.5 * beta);
}

}  // namespace

Est2Result check_est2(double beta, double a, double gamma_plus) {
  Est2Result r;
  r.beta = beta;
  r.a = a;
  r.gamma_plus = gamma_plus;
  const double ea = std::exp(-0.5 * beta * a);
  const double ep = std::exp(-0.5 * beta);
  r.pass = true;
  for (Side side : {Side::plus, Side::minus}) {
    const TransverseProblem tp{a, beta, side, side == Side::plus ? 0.0 : gamma_plus};
    Est2Side& s = side == Side::plus ? r.plus : r.minus;
    if (!transverse_in_regime(tp) || (side == Side::minus && gamma_plus * a > 1.0)) continue;
    s.skipped = false;
    const TransverseResult tr = transverse_secular(tp);
    s.zeta = tr.zeta;
    s.negative_count = transverse_grid_oracle(tp, transverse_grid_for(tp, 0.05), 1).negative_count;
    s.gap = est2_gap(tr.kappa, beta, a, tp.gamma_plus, side);
    if (side == Side::plus) {
      s.lower_margin = s.gap;
      s.upper_margin = 2.0 * beta * beta * ea - s.gap;
      s.printed_lower_margin = s.lower_margin;
      s.printed_upper_margin = 2.0 * beta * beta * ep - s.gap;
    } else {
      const double c = 2205.0 / 16.0 * beta * beta;
      s.lower_margin = s.gap + c * ea;
      s.upper_margin = -s.gap;
      s.printed_lower_margin = s.gap + c * ep;
      s.printed_upper_margin = s.upper_margin;
    }
    s.holds = s.lower_margin > 0.0 && s.upper_margin > 0.0 && s.negative_count == 1;
    s.printed_holds = s.printed_lower_margin > 0.0 && s.printed_upper_margin > 0.0 && s.negative_count == 1;
    r.pass = r.pass && s.holds;
  }
  return r;
}

}  // namespace abloop
