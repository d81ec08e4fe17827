#include "doctest.h"

#include <numbers>

#include "oracles.hpp"
#include "weldlab/equivariant.hpp"

using namespace weldlab;

namespace {

constexpr double pi = std::numbers::pi;

const EquivariantResult& standard() {
  static const EquivariantResult r = build_equivariant(EquivariantSpec{});
  return r;
}

std::size_t interior_breakpoint(const CircleHomeo& W) {
  const auto& bp = W.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    if (bp[k].theta > pi + 0.4) return k;
  }
  return bp.size() / 2;
}

}  // namespace

TEST_SUITE("equivariant") {

TEST_CASE("cayley coordinates") {
  for (double x : {-10.0, -1.0, 0.0, 0.5, 3.0}) {
    CHECK(cayley_angle(x) == doctest::Approx(oracle::angle(oracle::cayley(x))).epsilon(1e-14));
    CHECK(cayley_coordinate(cayley_angle(x)) == doctest::Approx(x).epsilon(1e-12));
  }
  const double t = 2.0;
  CHECK(parabolic_angle_power(t, 1.0, 3) ==
        doctest::Approx(oracle::angle(oracle::parabolic(3.0, std::polar(1.0, t)))).epsilon(1e-12));
}

TEST_CASE("single orbit arc") {
  const std::vector<Arc> I = orbit_arcs(1.0, 0);
  REQUIRE(I.size() == 1);
  CHECK(I[0].start == doctest::Approx(pi).epsilon(1e-15));
  CHECK(I[0].length == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(oracle::angle(oracle::cayley(0.0)) == doctest::Approx(pi));
  CHECK(oracle::angle(oracle::cayley(1.0)) == doctest::Approx(3 * pi / 2));
}

TEST_CASE("orbit lengths increase and stay below the circle") {
  double prev = 0.0;
  for (int N : {0, 1, 2, 5, 10, 20, 40}) {
    double total = 0.0;
    for (const Arc& a : orbit_arcs(1.0, N)) total += a.length;
    CHECK(total > prev);
    CHECK(total < kTwoPi);
    prev = total;
  }
  EquivariantSpec spec;
  spec.orbits = 40;
  CHECK(orbit_arcs(spec).disjoint());
}

TEST_CASE("orbit deficit against the endpoint formula") {
  // the union of I_n, |n| ≤ N, is the arc from arg φ(-N a) to arg φ((N+1) a)
  for (int N : {20, 40}) {
    double total = 0.0;
    for (const Arc& a : orbit_arcs(1.0, N)) total += a.length;
    const double exact = oracle::angle(oracle::cayley(N + 1.0)) - oracle::angle(oracle::cayley(-double(N)));
    CHECK(total == doctest::Approx(exact).epsilon(1e-12));
  }
  // 2π minus that union is 2 atan(1/(N+1)) + 2 atan(1/N), about 4/N
  double total = 0.0;
  for (const Arc& a : orbit_arcs(1.0, 40)) total += a.length;
  CHECK(kTwoPi - total == doctest::Approx(2 * std::atan(1.0 / 41) + 2 * std::atan(1.0 / 40)).epsilon(1e-10));
}

TEST_CASE("identity seed with equal translations") {
  EquivariantSpec spec;
  spec.a = spec.b = 1.0;
  spec.seed = SeedKind::linear;
  const EquivariantResult r = build_equivariant(spec);
  for (const auto& b : r.W.breakpoints()) CHECK(oracle::circle_gap(b.theta, b.psi) <= 1e-12);
  CHECK(functional_equation_residual(r, SampleGrid(2000)) <= 1e-12);
}

TEST_CASE("W fixes the point 1") {
  CHECK(standard().W.evaluate(0.0) == 0.0);
}

TEST_CASE("residual at transported breakpoints") {
  CHECK(breakpoint_residual(standard()) <= 1e-9);
  // direct recomputation from the stored orbit data
  const EquivariantResult& r = standard();
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < r.transported.size(); ++k) {
    const OrbitBreakpoint& p = r.transported[k];
    if (p.orbit >= r.spec.orbits || p.index != 3) continue;
    for (const OrbitBreakpoint& q : r.transported) {
      if (q.orbit != p.orbit + 1 || q.index != p.index) continue;
      worst = std::max(worst, oracle::circle_gap(q.theta, oracle::angle(oracle::parabolic(1.0, std::polar(1.0, p.theta)))));
      worst = std::max(worst, oracle::circle_gap(q.psi, oracle::angle(oracle::parabolic(2.0, std::polar(1.0, p.psi)))));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("functional equation on a grid") {
  CHECK(functional_equation_residual(CircleHomeo::identity(), parabolic_disk(1.0), parabolic_disk(1.0),
                                     SampleGrid(1000)) <= 1e-15);
  CHECK(functional_equation_residual(standard(), SampleGrid(10000)) <= 1e-6);
}

TEST_CASE("one perturbed breakpoint is detected") {
  const EquivariantResult& r = standard();
  const CircleHomeo bad = perturb_breakpoint(r.W, interior_breakpoint(r.W), 0.01);
  const double res = functional_equation_residual(bad, r.sigma(), r.tau(), SampleGrid(10000),
                                                  {r.window_lo, r.window_hi});
  CHECK(res >= 1e-3);
  const auto prof = residual_profile(bad, r.sigma(), r.tau(), SampleGrid(10000), {r.window_lo, r.window_hi});
  CHECK(*std::max_element(prof.begin(), prof.end()) == res);
}

TEST_CASE("spec validation") {
  EquivariantSpec spec;
  spec.a = -1.0;
  CHECK_THROWS_AS(build_equivariant(spec), std::invalid_argument);
  spec = {};
  spec.orbits = -1;
  CHECK_THROWS_AS(build_equivariant(spec), std::invalid_argument);
}

}  // TEST_SUITE
