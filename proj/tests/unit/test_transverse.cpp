#include <cmath>

#include <doctest.h>

#include "abloop/bracketing.hpp"
#include "abloop/error.hpp"
#include "abloop/transverse.hpp"

using namespace abloop;

TEST_CASE("Dirichlet secular root") {
  const TransverseProblem p{2.0, 10.0, Side::plus, 0.0};
  const TransverseResult r = transverse_secular(p);
  CHECK(r.in_regime);
  CHECK(r.kappa == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(2.0 * r.kappa / std::tanh(r.kappa * p.a) == doctest::Approx(p.beta).epsilon(1e-13));
  CHECK(r.zeta == doctest::Approx(-25.0).epsilon(1e-7));
}

TEST_CASE("Robin secular root satisfies the matching condition") {
  for (double g : {0.0, 0.5, 1.0}) {
    const TransverseProblem p{0.45, 20.0, Side::minus, g};
    const TransverseResult r = transverse_secular(p);
    // even eigenfunction cosh(kappa (a - |u|)) + c sinh(...) fitted to f'(a) = g f(a), jump 2 f'(0+) = -beta f(0)
    const double k = r.kappa, a = p.a;
    const double c = -g / k;  // f(v) = cosh(k v) + c sinh(k v), v = a - u
    const double f0 = std::cosh(k * a) + c * std::sinh(k * a);
    const double df0 = -(k * std::sinh(k * a) + c * k * std::cosh(k * a));
    CHECK(-2.0 * df0 == doctest::Approx(p.beta * f0).epsilon(1e-11));
  }
}

TEST_CASE("grid oracle converges to the secular root at second order") {
  const TransverseProblem p{0.45, 20.0, Side::plus, 0.0};
  const double exact = transverse_secular(p).zeta;
  const double e1 = transverse_grid_oracle(p, 400, 1).eigenvalues[0] - exact;
  const double e2 = transverse_grid_oracle(p, 800, 1).eigenvalues[0] - exact;
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
  const ExtrapolatedValue x = transverse_oracle_extrapolated(p, transverse_grid_for(p, 0.05));
  CHECK(std::abs(x.extrapolated - exact) < 1e-6 * std::abs(exact));
}

TEST_CASE("negative eigenvalue counts") {
  CHECK(transverse_grid_oracle({1.0, 10.0, Side::plus, 0.0}, 400).negative_count == 1);
  CHECK(transverse_grid_oracle({1.0, 10.0, Side::minus, 1.0}, 400).negative_count == 1);
  // gamma_plus a > 1 admits an odd bound state
  CHECK(transverse_grid_oracle({2.0, 10.0, Side::minus, 1.0}, 400).negative_count >= 2);
}

TEST_CASE("two-sided bounds") {
  const Est2Result r = check_est2(10.0, 1.0, 1.0);
  CHECK(r.pass);
  CHECK_FALSE(r.plus.skipped);
  CHECK_FALSE(r.minus.skipped);
  CHECK(r.plus.negative_count == 1);
  CHECK(r.minus.negative_count == 1);
  CHECK(r.plus.printed_holds);
  CHECK(r.minus.printed_holds);

  const Est2Result out = check_est2(2.0, 1.0, 1.0);
  CHECK(out.plus.skipped);
  CHECK(out.minus.skipped);

  // the a-independent exponent is too strong for narrow strips
  const Est2Result narrow = check_est2(10.0, 0.35, 1.0);
  CHECK(narrow.plus.holds);
  CHECK_FALSE(narrow.plus.printed_holds);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(transverse_secular({-1.0, 10.0, Side::plus, 0.0}), Error);
  CHECK_THROWS_AS(transverse_secular({1.0, 1.0, Side::plus, 0.0}), Error);  // beta a < 2: no bound state
  CHECK_THROWS_AS(transverse_secular({1.0, 1.0, Side::plus, 0.0}, true), Error);
  CHECK_THROWS_AS(transverse_grid_oracle({1.0, 10.0, Side::plus, 0.0}, 100), Error);
}

TEST_CASE("EST2 gap agrees with direct subtraction and stays strict for wide strips") {
  const Est2Result e = check_est2(10.0, 0.35, 1.0);
  CHECK(e.plus.gap == doctest::Approx(e.plus.zeta + 25.0).epsilon(1e-9));
  CHECK(e.minus.gap == doctest::Approx(e.minus.zeta + 25.0).epsilon(1e-9));
  const Est2Result wide = check_est2(40.0, 2.0, 0.2);
  CHECK(wide.plus.zeta == -400.0);  // the gap is below double resolution of zeta itself
  CHECK(wide.plus.gap > 0.0);
  CHECK(wide.minus.gap < 0.0);
  CHECK(wide.pass);
}
