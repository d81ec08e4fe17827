#include "doctest.h"

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "weldlab/detectors.hpp"
#include "weldlab/equivariant.hpp"
#include "weldlab/welding.hpp"

using namespace weldlab;

namespace {

using Samples = std::vector<std::pair<Complex, Complex>>;

double sup_residual(const Samples& s, Complex a, Complex b, Complex c, Complex d) {
  double r = 0.0;
  for (const auto& [z, w] : s) r = std::max(r, std::abs(oracle::mobius(a, b, c, d, z) - w));
  return r;
}

// Möbius map through (z_i -> w_i), i = 0..2, by the cross-ratio formula.
bool through(const Complex z[3], const Complex w[3], Complex m[4]) {
  // S_z(x) = ((x - z0)(z1 - z2)) / ((x - z2)(z1 - z0)) sends z to (0, 1, ∞); M = S_w⁻¹ ∘ S_z
  auto normal = [](const Complex p[3], Complex out[4]) {
    out[0] = p[1] - p[2];
    out[1] = -p[0] * (p[1] - p[2]);
    out[2] = p[1] - p[0];
    out[3] = -p[2] * (p[1] - p[0]);
  };
  Complex s[4], t[4];
  normal(z, s);
  normal(w, t);
  const Complex det = t[0] * t[3] - t[1] * t[2];
  if (std::abs(det) < 1e-14) return false;
  const Complex ti[4] = {t[3], -t[1], -t[2], t[0]};
  m[0] = ti[0] * s[0] + ti[1] * s[2];
  m[1] = ti[0] * s[1] + ti[1] * s[3];
  m[2] = ti[2] * s[0] + ti[3] * s[2];
  m[3] = ti[2] * s[1] + ti[3] * s[3];
  return std::abs(m[0] * m[3] - m[1] * m[2]) > 1e-14;
}

// Smallest sup residual over Möbius maps whose images of three reference samples lie
// on a polar grid in the radius-r disks around their targets. Any map with residual
// below r has its three reference images in those disks.
double brute_force_min(const Samples& s, std::size_t i0, std::size_t i1, std::size_t i2, double r) {
  std::vector<Complex> offsets{0.0};
  for (int ring = 1; ring <= 4; ++ring) {
    for (int k = 0; k < 12; ++k) offsets.push_back(std::polar(r * ring / 4.0, 2 * oracle::pi * (k + 0.5 * ring) / 12));
  }
  const Complex z[3] = {s[i0].first, s[i1].first, s[i2].first};
  double best = 1e300;
  for (Complex e0 : offsets) {
    for (Complex e1 : offsets) {
      for (Complex e2 : offsets) {
        const Complex w[3] = {s[i0].second + e0, s[i1].second + e1, s[i2].second + e2};
        Complex m[4];
        if (!through(z, w, m)) continue;
        best = std::min(best, sup_residual(s, m[0], m[1], m[2], m[3]));
      }
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("detectors") {

TEST_CASE("identity samples") {
  Samples s;
  for (int k = 0; k < 40; ++k) {
    const Complex z = std::polar(0.5 + 0.05 * k, 0.7 * k);
    s.emplace_back(z, z);
  }
  const MoebiusFit f = mobius_fit_residual(s);
  CHECK(f.residual <= 1e-10);
  CHECK(f.map.approx_equal(MoebiusMap::identity(), 1e-8));
}

TEST_CASE("cayley samples on the circle") {
  Samples s;
  for (int k = 0; k < 100; ++k) {
    const Complex z = std::polar(1.0, 2 * oracle::pi * (k + 0.5) / 100);
    s.emplace_back(z, oracle::cayley(z));
  }
  const MoebiusFit f = mobius_fit_residual(s);
  CHECK(f.residual <= 1e-8);
  CHECK(f.map.approx_equal(cayley(), 1e-6));
}

TEST_CASE("piecewise translations are far from every Möbius map") {
  const Samples s = piecewise_translation_samples(1.0, 2.0);
  REQUIRE(s.size() == 100);
  CHECK(sup_residual(s, 1.0, 1.0, 0.0, 1.0) == doctest::Approx(1.0));
  const double floor = brute_force_min(s, 0, 25, 60, 0.2);
  CHECK(floor >= 0.2);
  const MoebiusFit f = mobius_fit_residual(s);
  CHECK(f.residual >= 0.2);
  CHECK(f.residual <= 1.0);
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(mobius_fit_residual({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(mobius_fit_residual({{0.0, 0.0}, {0.0, 1.0}, {0.0, 2.0}, {0.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(mobius_fit_residual({{0.0, 0.0}, {1.0, std::nan("")}, {2.0, 2.0}, {3.0, 3.0}}),
                  std::invalid_argument);
}

TEST_CASE("disk automorphism conversion") {
  const DiskAutomorphism A(0.4, Complex(0.2, -0.5));
  const DiskAutomorphism B = to_disk_automorphism(A.to_moebius());
  for (double t : {0.0, 1.0, 3.0, 5.5}) CHECK(oracle::circle_gap(A.act_on_angle(t), B.act_on_angle(t)) <= 1e-12);
  CHECK_THROWS_AS(to_disk_automorphism(MoebiusMap::translation(0.3)), std::invalid_argument);
}

TEST_CASE("a homeomorphism is equivalent to itself") {
  const CircleHomeo h = welding_of_curve(PolygonCurve({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}), 512);
  const EquivalenceResult r = welding_equivalence(h, h, 1e-3);
  CHECK(r.equivalent);
  CHECK(r.residual <= 1e-3);
  CHECK(equivalence_residual(h, h, DiskAutomorphism(), DiskAutomorphism(), SampleGrid(512)) <= 1e-11);
}

TEST_CASE("planted witnesses are recovered") {
  const CircleHomeo h = welding_of_curve(PolygonCurve({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}), 512);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 2; ++trial) {
    const DiskAutomorphism A(kTwoPi * U(rng), std::polar(0.5 * std::sqrt(U(rng)), kTwoPi * U(rng)));
    const DiskAutomorphism B(kTwoPi * U(rng), std::polar(0.5 * std::sqrt(U(rng)), kTwoPi * U(rng)));
    const CircleHomeo h2 = conjugate_homeo(h, A, B);
    // conjugate_homeo against direct evaluation of B(h(A(θ)))
    for (double t : {0.3, 2.0, 4.4}) {
      CHECK(oracle::circle_gap(h2.evaluate(t), B.act_on_angle(h.evaluate(A.act_on_angle(t)))) <= 1e-3);
    }
    EquivalenceOptions opt;
    opt.seed = trial;
    const EquivalenceResult r = welding_equivalence(h, h2, 1e-3, opt);
    CHECK(r.equivalent);
    // re-composition with the recovered witnesses
    double worst = 0.0;
    for (int k = 0; k < 256; ++k) {
      const double t = kTwoPi * (k + 0.5) / 256;
      worst = std::max(worst, oracle::circle_gap(r.B.act_on_angle(h.evaluate(r.A.act_on_angle(t))), h2.evaluate(t)));
    }
    CHECK(worst <= 2e-3);
  }
}

TEST_CASE("W is far more distorted than a moderate Möbius boundary action") {
  EquivariantSpec spec;
  spec.seed_depth = 6;
  const CircleHomeo W = build_equivariant_homeo(spec);
  const CircleHomeo M = from_boundary_action(DiskAutomorphism(0.0, Complex(0.6, 0.0)).to_moebius(), SampleGrid(8192));
  const double scale = kTwoPi / 64;
  const double mobius_modulus = quasisymmetry_modulus(M, scale);
  CHECK(mobius_modulus < 2.0);
  CHECK(quasisymmetry_modulus(W, scale) > 10.0 * mobius_modulus);
}

}  // TEST_SUITE
