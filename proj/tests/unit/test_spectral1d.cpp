#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "abloop/curve.hpp"
#include "abloop/spectral1d.hpp"

using namespace abloop;
using std::numbers::pi;

namespace {

std::vector<double> circle_levels(double c0, int n) {
  std::vector<double> v;
  for (int k = -20; k <= 20; ++k) v.push_back((k - c0) * (k - c0) - 0.25);
  std::sort(v.begin(), v.end());
  v.resize(n);
  return v;
}

}  // namespace

TEST_CASE("comparison operator on the unit circle") {
  const FrameField f = FrameField::build(CurveSpec::circle(), 1024);
  ComparisonOptions o;
  o.basis_size = 256;
  for (double c0 : {0.0, 0.25, 0.5, 0.8}) {
    const auto mu = solve_comparison(f, Flux{c0}, 5, o);
    const auto ref = circle_levels(c0, 5);
    for (int j = 0; j < 5; ++j) CHECK(mu[j] == doctest::Approx(ref[j]).epsilon(1e-10));
  }
  ComparisonOptions periodic = o;
  periodic.boundary = FluxBoundary::periodic;
  const auto mu = solve_comparison(f, Flux{0.3}, 3, periodic);
  CHECK(mu[0] == doctest::Approx(-0.25));
  CHECK(mu[1] == doctest::Approx(0.75));
}

TEST_CASE("flux periodicity and conjugation symmetry") {
  const FrameField f = FrameField::build(CurveSpec::perturbed_circle(0.3), 1024);
  const auto a = solve_comparison(f, Flux{0.2}, 4);
  const auto b = solve_comparison(f, Flux{0.8}, 4);
  const auto c = solve_comparison(f, Flux{1.2}, 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-10));
    CHECK(a[j] == doctest::Approx(c[j]).epsilon(1e-10));
  }
}

TEST_CASE("Fourier and finite-difference solvers agree; rough potentials fall back") {
  LongitudinalProblem p;
  p.length = 2 * pi;
  p.boundary = FluxBoundary::twisted;
  p.c0 = 0.3;
  p.modes = 3;
  const int n = 512;
  for (int i = 0; i < n; ++i) p.potential.push_back(0.5 * std::cos(2 * pi * i / n));
  const auto smooth = solve_longitudinal(p);
  CHECK_FALSE(smooth.fallback);
  const auto fd = solve_longitudinal(p, LongitudinalMethod::finite_difference);
  for (int j = 0; j < 3; ++j) CHECK(fd.eigenvalues[j] == doctest::Approx(smooth.eigenvalues[j]).epsilon(2e-4));

  for (int i = 0; i < n; ++i) p.potential[i] = i < n / 2 ? 1.0 : -1.0;
  const auto rough = solve_longitudinal(p);
  CHECK(rough.fallback);
  CHECK(rough.method == "finite-difference");
}

TEST_CASE("bracketing operators sandwich the comparison operator") {
  const FrameField f = FrameField::build(CurveSpec::perturbed_circle(0.3), 1024);
  const Flux flux{0.25};
  const auto mu = solve_comparison(f, flux, 3);
  for (double a : {0.01, 0.05, 0.2}) {
    const auto up = solve_U_pm(f, flux, a, Side::plus, 3);
    const auto lo = solve_U_pm(f, flux, a, Side::minus, 3);
    for (int j = 0; j < 3; ++j) {
      CHECK(lo.mu[j] <= mu[j]);
      CHECK(mu[j] <= up.mu[j]);
    }
    CHECK(up.stiffness > 1.0);
    CHECK(lo.stiffness < 1.0);
  }
}
