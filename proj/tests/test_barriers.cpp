#include "nlpm/barriers.hpp"

#include <cmath>

#include "doctest.h"

using namespace nlpm;

namespace {

BarrierParams standard(Regime reg, double phi0 = 0.0) {
  BarrierParams bp;
  bp.m = 0.5;
  bp.mass = 1.0;
  bp.C = 0.8;
  bp.phi0 = phi0;
  bp.regime = reg;
  return bp;
}

}  // namespace

TEST_CASE("barrier reaches the mass equilibrium") {
  for (Regime reg : {Regime::Clogged, Regime::FastDiffusion}) {
    BarrierParams bp = standard(reg);
    const double t_end = 50.0 / bp.C;
    BarrierCurve c = solve_barrier(bp, t_end, 256);
    CHECK(c.values.back() == doctest::Approx(bp.mass).epsilon(1e-6));
    // Monotone nondecreasing from below the mass.
    for (std::size_t i = 1; i < c.values.size(); ++i) {
      CHECK(c.values[i] >= c.values[i - 1] - 1e-12);
      CHECK(c.values[i] <= bp.mass + 1e-12);
    }
  }
}

TEST_CASE("small-time asymptotics ((1 +- m) C mass t)^{1/(1 +- m)}") {
  for (Regime reg : {Regime::Clogged, Regime::FastDiffusion}) {
    BarrierParams bp = standard(reg);
    const double q = reg == Regime::Clogged ? 1.0 + bp.m : 1.0 - bp.m;
    const double t_end = 1e-3 / bp.C;
    BarrierCurve c = solve_barrier(bp, t_end, 64);
    for (std::size_t i = 8; i < c.times.size(); ++i) {
      const double expect = std::pow(q * bp.C * bp.mass * c.times[i], 1.0 / q);
      CHECK(c.values[i] == doctest::Approx(expect).epsilon(1e-2));
    }
  }
}

TEST_CASE("step halving changes the solution by less than 1e-8") {
  for (Regime reg : {Regime::Clogged, Regime::FastDiffusion}) {
    BarrierParams bp = standard(reg, 1e-3);
    BarrierCurve a = solve_barrier(bp, 5.0, 101, 64);
    BarrierCurve b = solve_barrier(bp, 5.0, 101, 128);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-8 * std::max(1.0, std::abs(b.values[i])));
  }
}

TEST_CASE("envelope lies below the ODE solution") {
  for (Regime reg : {Regime::Clogged, Regime::FastDiffusion}) {
    BarrierParams bp = standard(reg);
    BarrierCurve c = solve_barrier(bp, 20.0, 512);
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      const double env = barrier_envelope(bp, c.times[i]);
      CHECK(env <= c.values[i] * (1.0 + 1e-6) + 1e-12);
    }
    const double q = reg == Regime::Clogged ? 1.0 + bp.m : 1.0 - bp.m;
    const double pref = envelope_prefactor(bp);
    CHECK(pref > 0.0);
    CHECK(pref <= std::pow(q * bp.C, 1.0 / q) * (1.0 + 1e-12));
  }
}

TEST_CASE("curve interpolation") {
  BarrierCurve c;
  c.times = {0.0, 1.0, 2.0};
  c.values = {0.0, 2.0, 3.0};
  CHECK(c.at(-1.0) == 0.0);
  CHECK(c.at(0.5) == doctest::Approx(1.0));
  CHECK(c.at(1.5) == doctest::Approx(2.5));
  CHECK(c.at(5.0) == 3.0);
}

TEST_CASE("solve_barrier validation") {
  BarrierParams bp = standard(Regime::FastDiffusion);
  CHECK_THROWS_AS(solve_barrier(bp, -1.0, 64), validation_error);
  CHECK_THROWS_AS(solve_barrier(bp, 1.0, 1), validation_error);
  bp.phi0 = 2.0;  // above the mass
  CHECK_THROWS_AS(solve_barrier(bp, 1.0, 64), validation_error);
  bp = standard(Regime::FastDiffusion);
  bp.m = 1.5;
  CHECK_THROWS_AS(solve_barrier(bp, 1.0, 64), validation_error);
}

TEST_CASE("exponent formulas") {
  // Clogged d=1, s=1/2, m=1/2: gamma = 1/3, delta_1 = 1, zeta_1 = 3/2.
  ModelParams cl = make_params(1, 0.5, 0.5, Regime::Clogged, 1e-3);
  ExponentSet e = compute_exponents(cl, 1.0);
  CHECK(e.gamma == doctest::Approx(1.0 / 3.0));
  CHECK(e.delta_p == doctest::Approx(1.0));
  CHECK(e.zeta_p == doctest::Approx(1.5));

  // Fast diffusion: delta_fd = d / (s - d + 2 + m d), variant flips the sign of m d.
  ModelParams fd = make_params(1, 0.5, 0.5, Regime::FastDiffusion, 1e-3);
  ExponentSet ef = compute_exponents(fd, 1.0);
  CHECK(ef.delta_fd == doctest::Approx(0.5));
  ExponentSet em = compute_exponents(fd, 1.0, FdExponentVariant::MinusMd);
  CHECK(em.delta_fd == doctest::Approx(1.0));

  // Independent oracle for a second parameter set: d=2, s=1.5, m=0.25, p=2:
  // frac = 1.5, gamma = 0.5/1.5 = 1/3, delta_2 = 2/(3 - 0.5) = 0.8,
  // zeta_2 = 2*1.5/(2*1.5 - 0.5) = 1.2.
  ModelParams cl2 = make_params(2, 1.5, 0.25, Regime::Clogged, 1e-3);
  ExponentSet e2 = compute_exponents(cl2, 2.0);
  CHECK(e2.gamma == doctest::Approx(1.0 / 3.0));
  CHECK(e2.delta_p == doctest::Approx(0.8));
  CHECK(e2.zeta_p == doctest::Approx(1.2));

  CHECK_THROWS_AS(compute_exponents(cl, 0.5), validation_error);
  // gamma >= 1 requires p > gamma in the clogged regime: m=3, s=1/2 gives gamma = 2.
  ModelParams steep = make_params(1, 0.5, 3.0, Regime::Clogged, 1e-3);
  CHECK_THROWS_AS(compute_exponents(steep, 1.5), validation_error);
  CHECK_NOTHROW(compute_exponents(steep, 3.0));
}

TEST_CASE("barrier constant is the product of the two kernel constants") {
  ModelParams p = make_params(1, 0.5, 0.5, Regime::Clogged, 1e-3);
  CHECK(barrier_constant(p) == doctest::Approx(p.cds * p.cdalpha));
  CHECK(barrier_constant(p) > 0.0);
}
