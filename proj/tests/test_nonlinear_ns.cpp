#include <doctest.h>

#include "pdsys/error.hpp"
#include "pdsys/nonlinear_ns.hpp"

using namespace pdsys;

TEST_CASE("steady state is preserved") {
  NsParams p;
  const SpectralField z = SpectralField::zeros(2, 3, 16, 1.0);
  const NonlinearResult r = evolve_nonlinear_ns(p, z, {0.0, 0.05, 0.1});
  for (const auto& f : r.trajectory.fields) CHECK(f.l2_norm() <= 1e-12);
  CHECK(r.bounded);
}

TEST_CASE("small data follow the linearization") {
  NsParams p;
  p.d = 1;
  const SymbolicSystem lin = linearized_ns(p);
  for (double amp : {1e-2, 1e-3}) {
    CVec a(2);
    a << amp, 0.5 * amp;
    const SpectralField f = single_mode_field(1, 2, 32, 1.0, {1}, a);
    const std::vector<double> times = {0.0, 0.25, 0.5};
    const NonlinearResult r = evolve_nonlinear_ns(p, f, times);
    const Trajectory l = evolve_linear(lin, f, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double err = (r.trajectory.fields[i] - l.fields[i]).l2_norm() / l.fields[i].l2_norm();
      CAPTURE(amp);
      CHECK(err <= amp);
    }
  }
}

TEST_CASE("moderate small data keep the functional bounded") {
  NsParams p;
  SpectralField f = random_band_field(2, 3, 32, 1.0, 0.0, 4.0, 11);
  f *= 0.05 / f.l2_norm();
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(0.1 * i);
  NonlinearOptions opt;
  opt.dt = 2e-3;
  const NonlinearResult r = evolve_nonlinear_ns(p, f, times, opt);
  CHECK(r.bounded);
  for (const auto& row : r.functional) CHECK(row.functional <= 2.0 * r.functional.front().functional);
  CHECK(r.trajectory.fields.back().hermitian_defect() <= 1e-12);
}

TEST_CASE("error conditions") {
  NsParams p;
  p.d = 1;
  CVec a(2);
  a << 0.1, 0.5;
  const SpectralField f = single_mode_field(1, 2, 32, 1.0, {1}, a);
  SUBCASE("CFL") {
    NonlinearOptions opt;
    opt.dt = 0.5;
    try {
      evolve_nonlinear_ns(p, f, {0.0, 1.0}, opt);
      FAIL("expected CflViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCflViolation);
    }
  }
  SUBCASE("blowup") {
    NonlinearOptions opt;
    opt.blowup_factor = 0.5;
    try {
      evolve_nonlinear_ns(p, f, {0.0, 0.1}, opt);
      FAIL("expected BlowupDetected");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kBlowupDetected);
    }
  }
  SUBCASE("large data") {
    NonlinearOptions opt;
    opt.small_data = 1e-6;
    try {
      evolve_nonlinear_ns(p, f, {0.0, 0.1}, opt);
      FAIL("expected ParameterViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParameterViolation);
    }
  }
  SUBCASE("dimension") {
    NsParams q;
    q.d = 3;
    CHECK_THROWS_AS(evolve_nonlinear_ns(q, SpectralField::zeros(3, 4, 8, 1.0), {0.0}), Error);
  }
}
