#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "abloop/asymptotics.hpp"
#include "abloop/error.hpp"

using namespace abloop;

namespace {

const FrameField& circle() {
  static const FrameField f = FrameField::build(CurveSpec::circle(), 1024);
  return f;
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string l;
  std::getline(in, l);
  return l;
}

}  // namespace

TEST_CASE("envelope fit invariance under scaling") {
  const std::vector<double> b = {20, 40, 80, 160};
  const std::vector<double> e = {2.4e-3, 7.1e-4, 1.8e-4, 4.4e-5};
  std::vector<double> e3;
  for (double x : e) e3.push_back(3.0 * x);
  const EnvelopeFit f = fit_envelope(b, e), g = fit_envelope(b, e3);
  CHECK(g.C == doctest::Approx(3.0 * f.C));
  CHECK(g.residual == doctest::Approx(f.residual));
  CHECK(g.power_C == doctest::Approx(3.0 * f.power_C));
  CHECK(g.exponent == doctest::Approx(f.exponent));
  // exact envelope shape
  std::vector<double> exact;
  for (double x : b) exact.push_back(0.7 * std::log(x) / x);
  const EnvelopeFit h = fit_envelope(b, exact);
  CHECK(h.C == doctest::Approx(0.7));
  CHECK(h.residual < 1e-12);
  CHECK(h.exponent == doctest::Approx(1.0));
}

TEST_CASE("single-point sweep: report emitted, no fit") {
  SweepOptions o;
  o.strip = false;
  const SweepReport r = beta_sweep(circle(), Flux{0.25}, {50.0}, o);
  CHECK(r.records.size() == 1);
  CHECK_FALSE(r.fit.fitted);
  CHECK_FALSE(r.pass);
}

TEST_CASE("CSV schema and empty sweeps") {
  const auto dir = (std::filesystem::temp_directory_path() / "abloop_test_reports").string();
  std::filesystem::remove_all(dir);
  SweepOptions o;
  o.strip = false;
  o.n = 2;
  const SweepReport empty = beta_sweep(circle(), Flux{0.25}, {}, o);
  emit_report(empty, dir, "empty");
  CHECK(first_line(dir + "/empty.csv") ==
        "param,j,mu,zeta_plus,zeta_minus,tau_plus,tau_minus,kappa_plus,kappa_minus,err,regime_flags");
  CHECK_FALSE(std::filesystem::exists(dir + "/empty.svg"));

  const SweepReport beta = beta_sweep(circle(), Flux{0.25}, {50.0, 100.0}, o);
  emit_report(beta, dir, "beta");
  CHECK(std::filesystem::exists(dir + "/beta.svg"));
  CHECK(beta.records.size() == 4);

  const SweepReport flux = flux_sweep(circle(), 80.0, {0.25, 0.5, 0.75}, o);
  emit_report(flux, dir, "flux");
  CHECK(first_line(dir + "/flux.csv") ==
        "param,j,mu,zeta_plus,zeta_minus,tau_plus,tau_minus,kappa_plus,kappa_minus,err,regime_flags,lambda_mid,current");
  std::ifstream svg(dir + "/flux.svg");
  std::stringstream ss;
  ss << svg.rdbuf();
  CHECK(ss.str().find("width=\"1000\" height=\"700\"") != std::string::npos);
}

TEST_CASE("reports are reproducible") {
  SweepOptions o;
  o.strip = false;
  const auto a = report_csv(flux_sweep(circle(), 60.0, {0.2, 0.5, 0.8}, o));
  const auto b = report_csv(flux_sweep(circle(), 60.0, {0.2, 0.5, 0.8}, o));
  CHECK(a == b);
}

TEST_CASE("flux sweep on the circle: dispersion and odd current") {
  SweepOptions o;
  o.strip = false;
  std::vector<double> c0s;
  for (int i = 1; i <= 9; ++i) c0s.push_back(0.1 * i);
  const SweepReport r = flux_sweep(circle(), 80.0, c0s, o);
  CHECK(r.pass);
  CHECK(r.oddness < 0.05);
  for (const auto& rec : r.records) {
    const double k = std::min(std::abs(rec.c0), std::abs(1.0 - rec.c0));
    CHECK(rec.mu == doctest::Approx(k * k - 0.25).epsilon(1e-10));
  }
  // the twisted comparison operator varies by 1/4 between c0 = 0 and 1/2
  const auto m0 = solve_comparison(circle(), Flux{0.0}, 1), mh = solve_comparison(circle(), Flux{0.5}, 1);
  CHECK(mh[0] - m0[0] == doctest::Approx(0.25).epsilon(1e-10));

  // periodic comparison levels carry no flux; the circulation stays in N and widens the bracket
  o.boundary = FluxBoundary::periodic;
  const SweepReport p = flux_sweep(circle(), 80.0, {0.1}, o);
  CHECK(p.records.at(0).mu == doctest::Approx(-0.25).epsilon(1e-10));
  CHECK_THROWS_AS(flux_sweep(circle(), 80.0, {0.3}, o), Error);
}

TEST_CASE("axis validation") {
  CHECK_THROWS_AS(beta_sweep(circle(), Flux{0.25}, {40.0, 20.0}), Error);
  CHECK_THROWS_AS(flux_sweep(circle(), 40.0, {0.5, 1.2}), Error);
}
