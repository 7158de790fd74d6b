#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "abloop/curve.hpp"
#include "abloop/error.hpp"

using namespace abloop;
using std::numbers::pi;

namespace {

FrameField offset_perturbed(double eps, double dx, double dy) {
  FrameOptions o;
  o.offset_x = dx;
  o.offset_y = dy;
  return FrameField::build(CurveSpec::perturbed_circle(eps), o);
}

// covariant components of A = c0 (-y, x) / (x^2 + y^2) along the strip map, by central differences
std::pair<double, double> covariant_potential(const FrameField& f, double c0, double s, double u, double a) {
  const double h = 1e-5;
  auto P = [&](double ss, double uu) {
    const auto m = strip_map(f, {ss, uu, a});
    return std::array<double, 2>{m.x, m.y};
  };
  const auto p = P(s, u);
  const auto ps1 = P(s + h, u), ps0 = P(s - h, u), pu1 = P(s, u + h), pu0 = P(s, u - h);
  const double r2 = p[0] * p[0] + p[1] * p[1];
  const double Ax = -c0 * p[1] / r2, Ay = c0 * p[0] / r2;
  const double As = Ax * (ps1[0] - ps0[0]) / (2 * h) + Ay * (ps1[1] - ps0[1]) / (2 * h);
  const double Au = Ax * (pu1[0] - pu0[0]) / (2 * h) + Ay * (pu1[1] - pu0[1]) / (2 * h);
  return {As, Au};
}

}  // namespace

TEST_CASE("unit circle frame") {
  const FrameField f = FrameField::build(CurveSpec::circle(), 1024);
  CHECK(f.gamma_plus() == doctest::Approx(1.0));
  CHECK(f.a1() == doctest::Approx(0.99));
  CHECK(f.winding() == 1);
  CHECK(f.orientation() == 1);
  CHECK(f.total_curvature() == doctest::Approx(-2 * pi).epsilon(1e-12));
  CHECK(f.closure_residual() < 1e-12);
  for (double s : {0.0, 0.7, 2.0, 4.5}) {
    const FramePoint g = f.at(s);
    CHECK(g.gamma == doctest::Approx(-1.0));
    CHECK(g.H == doctest::Approx(s).epsilon(1e-12));
    CHECK(g.x == doctest::Approx(std::sin(s)).epsilon(1e-12));
    CHECK(g.y == doctest::Approx(-std::cos(s)).epsilon(1e-12));
    for (double u : {-0.5, 0.0, 0.3}) {
      const auto m = strip_map(f, {s, u, 0.6});
      CHECK(std::hypot(m.x, m.y) == doctest::Approx(1.0 - u).epsilon(1e-12));
      CHECK(m.jacobian == doctest::Approx(1.0 - u));
      CHECK(theta(f, {s, u, 0.6}) == doctest::Approx(1.0 / ((1 - u) * (1 - u))));
      const Omega om = omega(f, {s, u, 0.6});
      CHECK(om.omega1 == doctest::Approx(-1.0 / ((1 - u) * (1 - u))));
      CHECK(std::abs(om.omega2) < 1e-12);
      CHECK(effective_potential(f, {s, u, 0.6}) == doctest::Approx(-0.25 / ((1 - u) * (1 - u))));
    }
  }
}

TEST_CASE("signed curvature convention matches the position second derivatives") {
  const FrameField f = offset_perturbed(0.3, 0.05, -0.02);
  CHECK(f.convention_residual() < 1e-6);
  const double h = 1e-3;
  for (double s : {0.3, 1.9, 3.3, 5.0}) {
    auto pos = [&](double t) { const auto g = f.at(t); return std::array<double, 2>{g.x, g.y}; };
    const auto m = pos(s - h), c = pos(s), p = pos(s + h);
    const double d1x = (p[0] - m[0]) / (2 * h), d1y = (p[1] - m[1]) / (2 * h);
    const double d2x = (p[0] - 2 * c[0] + m[0]) / (h * h), d2y = (p[1] - 2 * c[1] + m[1]) / (h * h);
    CHECK(d2x * d1y - d2y * d1x == doctest::Approx(f.gamma(s)).epsilon(1e-5));
    CHECK(std::hypot(d1x, d1y) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("sampled and Fourier curvature data give the same frame") {
  const CurveSpec fourier = CurveSpec::perturbed_circle(0.3);
  CurveSpec samples;
  samples.length = 2 * pi;
  samples.kind = CurveSpec::Kind::samples;
  for (int i = 0; i < 64; ++i) samples.data.push_back(-1.0 + 0.3 * std::cos(2.0 * 2 * pi * i / 64));
  const FrameField a = FrameField::build(fourier, 512), b = FrameField::build(samples, 512);
  for (double s : {0.1, 1.0, 2.5, 6.0}) {
    CHECK(a.gamma(s) == doctest::Approx(b.gamma(s)).epsilon(1e-12));
    CHECK(a.at(s).x == doctest::Approx(b.at(s).x).epsilon(1e-12));
  }
}

TEST_CASE("gauge coefficients reproduce the covariant Aharonov-Bohm potential") {
  const FrameField f = offset_perturbed(0.3, 0.1, 0.05);
  const double c0 = 0.37, a = 0.3;
  for (double s : {0.4, 2.2, 4.1}) {
    for (double u : {-0.25, 0.0, 0.2}) {
      const auto [As, Au] = covariant_potential(f, c0, s, u, a);
      const double jac = 1.0 + u * f.gamma(s);
      const Omega om = omega(f, {s, u, a});
      CHECK(-c0 * jac * jac * om.omega1 == doctest::Approx(As).epsilon(1e-7));
      CHECK(c0 * om.omega2 == doctest::Approx(Au).epsilon(1e-7));
      const Omega op = omega(f, {s, u, a}, CoeffVariant::literal);
      CHECK(op.omega2 * jac == doctest::Approx(om.omega2).epsilon(1e-12));
    }
  }
}

TEST_CASE("gauge phase equals the change of polar angle") {
  const FrameField f = offset_perturbed(0.3, 0.1, 0.05);
  const double c0 = 0.25, a = 0.3;
  auto closed = [&](double s, double u) {
    const FramePoint g = f.at(s);
    const auto m = strip_map(f, {s, u, a});
    return c0 * std::arg(std::complex<double>(m.x, m.y) / std::complex<double>(g.x, g.y));
  };
  for (double s : {0.2, 1.3, 3.9}) {
    for (double u : {-0.3, -0.1, 0.15, 0.3}) {
      CHECK(gauge_phase(f, Flux{c0}, {s, u, a}) == doctest::Approx(closed(s, u)).epsilon(1e-11));
      const double h = 1e-4;
      const double ds = (closed(s + h, u) - closed(s - h, u)) / (2 * h);
      CHECK(gauge_phase_ds(f, Flux{c0}, {s, u, a}) == doctest::Approx(ds).epsilon(1e-6));
    }
  }
}

TEST_CASE("circulation integrates to the enclosed flux") {
  const FrameField f = offset_perturbed(0.3, 0.1, 0.05);
  const int n = 2048;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += circulation_density(f.at(f.length() * i / n), 0.4);
  CHECK(sum * f.length() / n == doctest::Approx(-2 * pi * 0.4).epsilon(1e-10));
}

TEST_CASE("coefficient bounds vanish linearly with the halfwidth in the twisted frame") {
  const FrameField f = FrameField::build(CurveSpec::perturbed_circle(0.3), 1024);
  const Flux flux{0.25};
  const CoeffBounds small = coeff_bounds(f, flux, 0.01), smaller = coeff_bounds(f, flux, 0.005);
  CHECK(small.N + small.M < 0.2);
  CHECK((small.N + small.M) / (smaller.N + smaller.M) == doctest::Approx(2.0).epsilon(0.1));
  CoeffBoundsOptions periodic;
  periodic.boundary = FluxBoundary::periodic;
  CHECK(coeff_bounds(f, flux, 0.005, periodic).N > 0.4);  // circulation stays in the coefficients
  const FrameField c = FrameField::build(CurveSpec::circle(), 512);
  CHECK(coeff_bounds(c, flux, 0.2).N < 1e-9);
}

TEST_CASE("precondition and geometry errors") {
  const FrameField f = FrameField::build(CurveSpec::circle(), 256);
  CHECK_THROWS_AS(strip_map(f, {0.0, 0.995, 0.3}), Error);
  CHECK_THROWS_AS(theta(f, {0.0, 0.1, 1.5}), Error);
  CHECK_THROWS_AS(coeff_bounds(f, Flux{0.2}, 0.6), Error);
  CurveSpec open = CurveSpec::circle();
  open.data = {-0.9};
  CHECK_THROWS_AS(FrameField::build(open, 256), Error);
  FrameOptions far;
  far.offset_x = 3.0;
  CHECK_THROWS_AS(FrameField::build(CurveSpec::circle(), far), Error);
  try {
    CurveSpec::parse_json("{\"length\": 1");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}

TEST_CASE("curve json round trip") {
  const CurveSpec c = CurveSpec::perturbed_circle(0.3);
  const CurveSpec d = CurveSpec::parse_json(c.to_json());
  CHECK(d.length == c.length);
  CHECK(d.data == c.data);
  CHECK(d.kind == c.kind);
}
