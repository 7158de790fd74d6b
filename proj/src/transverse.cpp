#include "abloop/transverse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "abloop/error.hpp"

namespace abloop {

bool transverse_in_regime(const TransverseProblem& p) {
  if (p.side == Side::plus) return p.beta * p.a > 8.0 / 3.0;
  return p.beta > 8.0 && p.beta > 8.0 * p.gamma_plus / 3.0;
}

namespace {

struct Secular {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

Secular secular_function(const TransverseProblem& p) {
  const double a = p.a, beta = p.beta, g = p.gamma_plus;
  if (p.side == Side::plus) {
    return {[=](double k) { return 2.0 * k / std::tanh(k * a) - beta; },
            [=](double k) {
              const double sh = std::sinh(k * a);
              const double coth = 1.0 / std::tanh(k * a);
              return std::isfinite(sh) ? 2.0 * coth - 2.0 * k * a / (sh * sh) : 2.0 * coth;
            }};
  }
  // multiplied through by kappa > 0
  return {[=](double k) {
            const double t = std::tanh(k * a);
            return 2.0 * k * (k * t - g) - beta * (k - g * t);
          },
          [=](double k) {
            const double t = std::tanh(k * a);
            const double sech2 = 1.0 - t * t;
            return 2.0 * (2.0 * k * t + k * k * a * sech2 - g) - beta * (1.0 - g * a * sech2);
          }};
}

}  // namespace

TransverseResult transverse_secular(const TransverseProblem& p, bool strict) {
  if (!(p.a > 0.0) || !(p.beta > 0.0) || p.gamma_plus < 0.0) {
    throw Error(ErrorKind::precondition, "transverse problem needs a > 0, beta > 0, gamma_plus >= 0");
  }
  TransverseResult r;
  r.in_regime = transverse_in_regime(p);
  if (strict && !r.in_regime) throw Error(ErrorKind::precondition, "outside-proposition-regime");

  const Secular sec = secular_function(p);
  double lo = 1e-12, hi = p.beta;
  double flo = sec.f(lo), fhi = sec.f(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    std::ostringstream os;
    os << "no sign change of the secular function on (1e-12, beta) for beta=" << p.beta << ", a=" << p.a;
    throw Error(ErrorKind::root_bracketing, os.str());
  }
  for (int it = 0; it < 400 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = sec.f(mid);
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double k = 0.5 * (lo + hi);
  for (int it = 0; it < 2; ++it) {
    const double d = sec.df(k);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double next = k - sec.f(k) / d;
    if (next > lo - 1e-12 && next < hi + 1e-12) k = next;
  }
  r.kappa = k;
  r.zeta = -k * k;
  r.residual = std::abs(sec.f(k));
  return r;
}

namespace {

// Symmetric tridiagonal matrix W^{-1/2} S W^{-1/2} of the discrete form.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

Tridiagonal assemble_transverse(const TransverseProblem& p, int n) {
  const double h = 2.0 * p.a / n;
  const int mid = n / 2;
  // nodes 0..n; Dirichlet keeps 1..n-1
  const int first = p.side == Side::plus ? 1 : 0;
  const int last = p.side == Side::plus ? n - 1 : n;
  const int m = last - first + 1;
  std::vector<double> S(m, 0.0), off(m > 0 ? m - 1 : 0, 0.0), w(m, h);
  for (int j = 0; j < n; ++j) {  // face (j, j+1)
    const int a = j - first, b = j + 1 - first;
    if (a >= 0 && a < m) S[a] += 1.0 / h;
    if (b >= 0 && b < m) S[b] += 1.0 / h;
    if (a >= 0 && b < m) off[a] -= 1.0 / h;
  }
  S[mid - first] -= p.beta;
  if (p.side == Side::minus) {
    S[0] -= p.gamma_plus;
    S[m - 1] -= p.gamma_plus;
    w[0] = 0.5 * h;
    w[m - 1] = 0.5 * h;
  }
  Tridiagonal t;
  t.diag.resize(m);
  t.off.resize(m - 1);
  for (int i = 0; i < m; ++i) t.diag[i] = S[i] / w[i];
  for (int i = 0; i + 1 < m; ++i) t.off[i] = off[i] / std::sqrt(w[i] * w[i + 1]);
  return t;
}

// Number of eigenvalues strictly below x (Sturm sequence of the LDL^T pivots).
int count_below(const Tridiagonal& t, double x) {
  int count = 0;
  double q = t.diag[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

SpectralResult transverse_grid_oracle(const TransverseProblem& p, int grid_size, int count) {
  if (grid_size < 200 || grid_size % 2 != 0) {
    throw Error(ErrorKind::precondition, "transverse grid needs an even number of intervals >= 200");
  }
  return transverse_grid_eigenvalues(p, grid_size, count);
}

SpectralResult transverse_grid_eigenvalues(const TransverseProblem& p, int grid_size, int count) {
  if (grid_size < 4 || grid_size % 2 != 0) {
    throw Error(ErrorKind::precondition, "transverse grid needs an even number of intervals >= 4");
  }
  if (!(p.a > 0.0) || p.beta < 0.0) throw Error(ErrorKind::precondition, "transverse grid needs a > 0, beta >= 0");
  const Tridiagonal t = assemble_transverse(p, grid_size);
  const int m = static_cast<int>(t.diag.size());
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < m ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  SpectralResult res;
  res.size = grid_size;
  res.method = "finite-difference-sturm";
  res.negative_count = count_below(t, 0.0);
  for (int k = 0; k < std::min(count, m); ++k) {
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 4e-16 * std::max({1.0, std::abs(a), std::abs(b)}); ++it) {
      const double mid = 0.5 * (a + b);
      if (count_below(t, mid) > k) {
        b = mid;
      } else {
        a = mid;
      }
    }
    res.eigenvalues.push_back(0.5 * (a + b));
    res.residuals.push_back(b - a);
  }
  return res;
}

ExtrapolatedValue transverse_oracle_extrapolated(const TransverseProblem& p, int grid_size) {
  ExtrapolatedValue v;
  v.coarse = transverse_grid_oracle(p, grid_size, 1).eigenvalues.at(0);
  v.fine = transverse_grid_oracle(p, 2 * grid_size, 1).eigenvalues.at(0);
  v.extrapolated = (4.0 * v.fine - v.coarse) / 3.0;
  return v;
}

int transverse_grid_for(const TransverseProblem& p, double beta_h) {
  const double h = beta_h / std::max(p.beta, 1e-12);
  int n = static_cast<int>(std::ceil(2.0 * p.a / h));
  if (n % 2) ++n;
  return std::max(n, 200);
}

}  // namespace abloop
