#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "weldlab/moebius.hpp"

using namespace weldlab;

namespace {

bool near(const ExtComplex& p, Complex z, double tol = 1e-12) {
  return p.is_finite() && std::abs(p.value() - z) <= tol;
}

}  // namespace

TEST_SUITE("moebius") {

TEST_CASE("cayley map at special points") {
  const MoebiusMap phi = cayley();
  CHECK(near(phi.apply(ExtComplex::infinity()), 1.0));
  CHECK(near(phi.apply(0.0), -1.0));
  CHECK(near(phi.apply(Complex(0, 1)), 0.0));
  CHECK(near(phi.apply(1.0), Complex(0, -1)));
  CHECK(phi.apply(Complex(0, -1)).is_infinite());
}

TEST_CASE("cayley sends the real axis to the unit circle") {
  const MoebiusMap phi = cayley();
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = -50.0 + 100.0 * k / 999.0;
    worst = std::max(worst, std::abs(std::abs(phi.apply(x).value()) - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("composition with the identity and inverses") {
  const MoebiusMap A(Complex(1, 2), Complex(0.5, -1), Complex(0.2, 0.1), Complex(3, 0));
  CHECK(compose(A, MoebiusMap::identity()).approx_equal(A, 1e-14));
  CHECK(compose(MoebiusMap::identity(), A).approx_equal(A, 1e-14));
  const MoebiusMap phi = cayley();
  CHECK(compose(phi, inverse(phi)).approx_equal(MoebiusMap::identity(), 1e-14));
  CHECK(inverse(MoebiusMap::identity()).approx_equal(MoebiusMap::identity(), 0.0));
}

TEST_CASE("inverse of cayley is i(1+z)/(1-z)") {
  const MoebiusMap expected(Complex(0, 1), Complex(0, 1), -1.0, 1.0);
  CHECK(inverse(cayley()).approx_equal(expected, 1e-14));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Complex z(N(rng), N(rng));
    const Complex back = inverse(cayley()).apply(cayley().apply(z)).value();
    worst = std::max(worst, std::abs(back - z) / (1.0 + std::abs(z)));
    worst = std::max(worst, std::abs(inverse(cayley()).apply(z).value() - oracle::cayley_inv(z)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("parabolic automorphisms form a group") {
  CHECK(compose(parabolic_disk(1.0), parabolic_disk(2.0)).approx_equal(parabolic_disk(3.0), 1e-14));
  CHECK(compose(parabolic_disk(1.0), parabolic_disk(1.0)).approx_equal(parabolic_disk(2.0), 1e-14));
  CHECK(inverse(parabolic_disk(1.5)).approx_equal(conjugated_translation(-1.5), 1e-14));
  CHECK(near(parabolic_disk(1.0).apply(-1.0), Complex(0, -1), 1e-14));
  const MoebiusMap direct = compose(cayley(), compose(MoebiusMap::translation(1.0), inverse(cayley())));
  CHECK(parabolic_disk(1.0).approx_equal(direct, 1e-14));
  for (double t : {0.3, 1.0, 2.0, 4.0}) {
    const Complex z = std::polar(1.0, t);
    CHECK(std::abs(parabolic_disk(0.7).apply(z).value() - oracle::parabolic(0.7, z)) <= 1e-12);
  }
  CHECK_THROWS_AS(parabolic_disk(0.0), std::invalid_argument);
}

TEST_CASE("fixed points") {
  {
    const FixedPointSet f = fixed_points(MoebiusMap::translation(1.0));
    REQUIRE(f.points.size() == 1);
    CHECK(f.points[0].is_infinite());
  }
  for (double a : {0.5, 1.0, 2.0}) {
    const FixedPointSet f = fixed_points(parabolic_disk(a));
    REQUIRE(f.points.size() == 1);
    CHECK(near(f.points[0], 1.0, 1e-7));
  }
  {
    const FixedPointSet f = fixed_points(MoebiusMap::scaling(2.0));
    REQUIRE(f.points.size() == 2);
    const bool zero_inf = (near(f.points[0], 0.0) && f.points[1].is_infinite()) ||
                          (near(f.points[1], 0.0) && f.points[0].is_infinite());
    CHECK(zero_inf);
  }
  CHECK(fixed_points(MoebiusMap::identity()).all);
}

TEST_CASE("three point fits") {
  const ExtComplex inf = ExtComplex::infinity();
  CHECK(fit_three_points({0.0, 1.0, inf}, {0.0, 1.0, inf}).approx_equal(MoebiusMap::identity(), 1e-14));
  CHECK(fit_three_points({0.0, Complex(0, 1), inf}, {-1.0, 0.0, 1.0}).approx_equal(cayley(), 1e-14));
  CHECK(fit_three_points({0.0, 1.0, inf}, {1.0, 2.0, inf}).approx_equal(MoebiusMap::translation(1.0), 1e-14));
  CHECK_THROWS_AS(fit_three_points({0.0, 0.0, inf}, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("cross ratio is preserved") {
  const MoebiusMap A(Complex(1, 1), 2.0, Complex(0, 0.5), 1.0);
  const Complex z[4] = {0.1, Complex(0.4, 1), Complex(-2, 0.3), Complex(3, -1)};
  Complex w[4];
  for (int k = 0; k < 4; ++k) w[k] = A.apply(z[k]).value();
  CHECK(std::abs(cross_ratio(z[0], z[1], z[2], z[3]) - cross_ratio(w[0], w[1], w[2], w[3])) <= 1e-12);
}

TEST_CASE("disk automorphisms preserve the circle") {
  const DiskAutomorphism A(0.7, Complex(0.3, -0.4));
  CHECK(preserves_unit_circle(A.to_moebius(), 256, 1e-12));
  CHECK_FALSE(preserves_unit_circle(MoebiusMap::translation(0.1), 64, 1e-10));
  for (double t : {0.0, 1.0, 2.5, 5.0}) {
    const Complex z = std::polar(1.0, t);
    const Complex w = std::polar(1.0, 0.7) * (z - Complex(0.3, -0.4)) / (1.0 - std::conj(Complex(0.3, -0.4)) * z);
    CHECK(oracle::circle_gap(A.act_on_angle(t), oracle::angle(w)) <= 1e-12);
  }
  CHECK_THROWS_AS(DiskAutomorphism(0.0, Complex(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("degenerate coefficients are rejected") {
  CHECK_THROWS_AS(MoebiusMap(1.0, 2.0, 2.0, 4.0), std::invalid_argument);
}

}  // TEST_SUITE
