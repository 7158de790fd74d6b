#include <omp.h>

#include <doctest.h>

#include "abloop/curve.hpp"
#include "abloop/error.hpp"
#include "abloop/kernels.hpp"

using namespace abloop;

TEST_CASE("serial and parallel field kernels are bitwise identical") {
  FrameOptions fo;
  fo.offset_x = 0.1;
  const FrameField f = FrameField::build(CurveSpec::perturbed_circle(0.3), fo);
  omp_set_num_threads(4);
  for (StripForm form : {StripForm::b, StripForm::b_tilde}) {
    StripFieldRequest rq;
    rq.frame = &f;
    rq.c0 = 0.25;
    rq.a = 0.3;
    rq.n_s = 48;
    rq.n_u = 33;
    rq.form = form;
    rq.with_phase = true;
    const StripFields s = serial::evaluate_strip_fields(rq);
    const StripFields p = parallel::evaluate_strip_fields(rq);
    CHECK(s.potential == p.potential);
    CHECK(s.s_stiffness == p.s_stiffness);
    CHECK(s.s_flux == p.s_flux);
    CHECK(s.u_flux == p.u_flux);
    CHECK(s.phase == p.phase);
  }
}

TEST_CASE("phase column agrees with the pointwise quadrature") {
  FrameOptions fo;
  fo.offset_x = 0.1;
  const FrameField f = FrameField::build(CurveSpec::perturbed_circle(0.3), fo);
  const std::vector<double> u = {-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3};
  const FramePoint g = f.at(1.1);
  const auto K = phase_column(g, 0.25, u, CoeffVariant::derived);
  for (std::size_t j = 0; j < u.size(); ++j) CHECK(K[j] == doctest::Approx(gauge_phase(g, 0.25, u[j])).epsilon(1e-12));
}

TEST_CASE("zero flux removes every flux term") {
  const FrameField f = FrameField::build(CurveSpec::perturbed_circle(0.3), 512);
  StripFieldRequest rq;
  rq.frame = &f;
  rq.a = 0.3;
  rq.n_s = 16;
  rq.n_u = 9;
  const StripFields b = serial::evaluate_strip_fields(rq);
  rq.form = StripForm::b_tilde;
  const StripFields t = serial::evaluate_strip_fields(rq);
  CHECK(b.potential == t.potential);
  CHECK(b.s_flux == t.s_flux);
  for (double c : b.s_flux) CHECK(c == 0.0);
}

TEST_CASE("request validation") {
  const FrameField f = FrameField::build(CurveSpec::circle(), 256);
  StripFieldRequest rq;
  rq.frame = &f;
  rq.a = 0.3;
  rq.n_s = 16;
  rq.n_u = 10;
  CHECK_THROWS_AS(serial::evaluate_strip_fields(rq), Error);
  rq.n_u = 9;
  rq.a = 1.5;
  CHECK_THROWS_AS(parallel::evaluate_strip_fields(rq), Error);
}
