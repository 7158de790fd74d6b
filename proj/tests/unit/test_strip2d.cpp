#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "../support/oracles.hpp"
#include "abloop/error.hpp"
#include "abloop/strip2d.hpp"

using namespace abloop;

namespace {

const FrameField& circle() {
  static const FrameField f = FrameField::build(CurveSpec::circle(), 2048);
  return f;
}

const FrameField& perturbed() {
  static const FrameField f = FrameField::build(CurveSpec::perturbed_circle(0.3), 2048);
  return f;
}

double hermitian_defect(const SparseMatrixC& A) {
  const SparseMatrixC d = A - SparseMatrixC(A.adjoint());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

}  // namespace

TEST_CASE("assembled matrices are Hermitian") {
  for (Side side : {Side::plus, Side::minus}) {
    for (StripForm form : {StripForm::b, StripForm::b_tilde}) {
      StripSetup st;
      st.side = side;
      st.form = form;
      const StripOperator op = assemble(perturbed(), Flux{0.25}, 0.3, 10.0, {32, 33}, st);
      CHECK(hermitian_defect(op.matrix) == 0.0);
      CHECK(hermitian_defect(op.form) == 0.0);
    }
  }
}

TEST_CASE("zero flux: b and b~ coincide") {
  StripSetup b, t;
  t.form = StripForm::b_tilde;
  const StripOperator ob = assemble(perturbed(), Flux{0.0}, 0.3, 10.0, {32, 33}, b);
  const StripOperator ot = assemble(perturbed(), Flux{0.0}, 0.3, 10.0, {32, 33}, t);
  CHECK(SparseMatrixC(ob.matrix - ot.matrix).norm() == 0.0);
}

TEST_CASE("circle strip eigenvalues match the separated annulus problem") {
  const double a = 0.4, beta = 10.0, c0 = 0.25;
  const StripGrid g = StripGrid::for_problem(a, beta, 64);
  for (Side side : {Side::plus, Side::minus}) {
    StripSetup st;
    st.side = side;
    const StripEstimate e = estimate_eigs(circle(), Flux{c0}, a, beta, g, st, 3);
    const auto ref = oracle::annulus_levels(a, beta, c0, side == Side::plus, 3);
    for (int j = 0; j < 3; ++j) {
      INFO("side " << to_string(side) << " j=" << j + 1 << " tol " << e.tolerance[j]);
      CHECK(std::abs(e.value[j] - ref[j]) <= std::max(4.0 * e.tolerance[j], 1e-7 * std::abs(ref[j])));
    }
  }
}

TEST_CASE("zero coupling, zero flux: Dirichlet ground state of the annulus") {
  const double a = 0.3;
  StripSetup st;
  const StripEstimate e = estimate_eigs(circle(), Flux{0.0}, a, 0.0, {32, 65}, st, 1);
  const auto ref = oracle::annulus_levels(a, 0.0, 0.0, true, 1);
  CHECK(e.value[0] == doctest::Approx(ref[0]).epsilon(1e-6));
  // separable estimate (pi / 2a)^2 - 1/4
  CHECK(e.value[0] == doctest::Approx(std::pow(M_PI / (2 * a), 2) - 0.25).epsilon(0.01));
}

TEST_CASE("eigenvalue ordering: nondecreasing in j, Robin below Dirichlet") {
  StripSetup plus, minus;
  minus.side = Side::minus;
  const StripGrid g{48, 129};
  const auto ep = lowest_eigs(assemble(perturbed(), Flux{0.25}, 0.3, 20.0, g, plus), 4);
  const auto em = lowest_eigs(assemble(perturbed(), Flux{0.25}, 0.3, 20.0, g, minus), 4);
  for (int j = 0; j < 4; ++j) {
    if (j > 0) CHECK(ep.values[j] >= ep.values[j - 1]);
    CHECK(em.values[j] <= ep.values[j]);
    CHECK(ep.residuals[j] <= 1e-8 * std::abs(ep.values[j]));
  }
}

TEST_CASE("quadratic form consistency with the continuum form") {
  std::mt19937_64 rng(7);
  const double a = 0.3, beta = 5.0, c0 = 0.25;
  for (StripForm form : {StripForm::b, StripForm::b_tilde}) {
    for (Side side : {Side::plus, Side::minus}) {
      const oracle::ContinuumForm exact(perturbed(), c0, a, beta, form, side);
      StripSetup st;
      st.form = form;
      st.side = side;
      const StripOperator c = assemble(perturbed(), Flux{c0}, a, beta, {32, 33}, st);
      const StripOperator f = assemble(perturbed(), Flux{c0}, a, beta, {64, 65}, st);
      double ec = 0.0, ef = 0.0;
      for (int t = 0; t < 5; ++t) {
        const auto fn = oracle::TestFunction::random(rng, perturbed().length(), a, side == Side::plus);
        const double ref = exact(fn);
        ec += std::pow(oracle::discrete_form(c, fn) - ref, 2);
        ef += std::pow(oracle::discrete_form(f, fn) - ref, 2);
      }
      INFO(to_string(form) << to_string(side));
      CHECK(0.5 * std::log2(ec / ef) >= 1.8);
    }
  }
}

TEST_CASE("lemma 2 checks") {
  SUBCASE("zero flux is exact") {
    const Lemma2Report r = lemma2_check(perturbed(), Flux{0.0}, 0.3, 20.0, {32, 129});
    CHECK(r.similarity_error == 0.0);
    for (double d : r.diff_coarse) CHECK(d == 0.0);
    CHECK(r.order_ok);
  }
  SUBCASE("circle: similarity to rounding") {
    const Lemma2Report r = lemma2_check(circle(), Flux{0.5}, 0.3, 40.0, {32, 129});
    CHECK(r.similarity_error <= 1e-12);
    CHECK(r.similarity_ok);
  }
  SUBCASE("perturbed loop: second-order agreement and ground-state overlap") {
    const Lemma2Report r = lemma2_check(perturbed(), Flux{0.25}, 0.3, 20.0, {32, 129});
    CHECK(r.similarity_ok);
    CHECK(r.order_resolved);
    CHECK(r.order_ok);
    CHECK(r.overlap > 0.999);
  }
}

TEST_CASE("resolution and precondition errors") {
  try {
    assemble(circle(), Flux{0.25}, 0.4, 100.0, {32, 33});
    FAIL("expected a resolution error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::resolution);
  }
  CHECK_THROWS_AS(assemble(circle(), Flux{0.25}, 0.6, 10.0, {32, 33}), Error);
  CHECK_THROWS_AS(assemble(circle(), Flux{0.25}, 0.3, 10.0, {32, 34}), Error);
  CHECK(StripGrid::for_problem(0.3, 20.0).n_u == 129);
  CHECK(StripGrid::for_problem(0.3, 400.0).n_u == 481);
}

TEST_CASE("matrix market dump") {
  const StripOperator op = assemble(circle(), Flux{0.25}, 0.3, 10.0, {8, 9});
  std::ostringstream os;
  write_matrix_market(op, os);
  std::istringstream is(os.str());
  std::string header, comment;
  std::getline(is, header);
  std::getline(is, comment);
  int r, c, nnz;
  is >> r >> c >> nnz;
  CHECK(header == "%%MatrixMarket matrix coordinate complex general");
  CHECK(r == op.unknowns());
  CHECK(nnz == op.matrix.nonZeros());
}
