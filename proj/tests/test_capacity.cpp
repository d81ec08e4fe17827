#include "doctest.h"

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "weldlab/capacity.hpp"
#include "weldlab/circle_homeo.hpp"

using namespace weldlab;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> roots_of_unity_angles(int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = kTwoPi * k / n;
  return t;
}

}  // namespace

TEST_SUITE("capacity") {

TEST_CASE("discrete energy") {
  CHECK(std::abs(discrete_energy(DiscreteMeasure({0.0, pi}, {0.5, 0.5}))) <= 1e-15);
  CHECK(std::isinf(discrete_energy(DiscreteMeasure({1.0}, {1.0}))));
  // Π_{j≠i}|z_i - z_j| = n for the n-th roots of unity
  const int n = 512;
  const auto t = roots_of_unity_angles(n);
  const std::vector<double> w(n, 1.0 / n);
  const double exact = (n - 1.0) / n * std::log(2.0) - std::log(double(n)) / n;
  CHECK(discrete_energy(DiscreteMeasure(t, w)) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(discrete_energy(DiscreteMeasure(t, w)) == doctest::Approx(oracle::pair_energy(t, w)).epsilon(1e-12));
}

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(DiscreteMeasure({0.0, 1.0}, {0.7, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure({0.0, 1.0}, {1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure({0.0, 0.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure({0.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("arc closed form") {
  CHECK(arc_capacity_closed_form(kTwoPi) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(arc_capacity_closed_form(pi) == doctest::Approx(1.0 / std::log(2.0 * std::sqrt(2.0))).epsilon(1e-15));
  CHECK(arc_capacity_closed_form(pi) == doctest::Approx(0.96180).epsilon(1e-5));
  double prev = arc_capacity_closed_form(1.0);
  for (double L = 0.1; L > 1e-200; L *= 1e-10) {
    const double c = arc_capacity_closed_form(L);
    CHECK(c > 0.0);
    CHECK(c < prev);
    prev = c;
  }
  for (double L : {1e-30, 1e-5, 0.3, 2.0, 6.0}) {
    CHECK(arc_length_for_capacity(arc_capacity_closed_form(L)) == doctest::Approx(L).epsilon(1e-9));
  }
  CHECK_THROWS_AS(arc_capacity_closed_form(0.0), std::invalid_argument);
  CHECK_THROWS_AS(arc_capacity_closed_form(7.0), std::invalid_argument);
}

TEST_CASE("equilibrium on the full circle is uniform") {
  const EquilibriumResult r = equilibrium_measure(ArcSet::full_circle(), 512);
  CHECK(r.energy == doctest::Approx(std::log(2.0)).epsilon(0.01));
  double lo = 1.0, hi = 0.0;
  for (double w : r.measure.weights()) {
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  CHECK(hi - lo <= 1e-6);
}

TEST_CASE("equilibrium weights beat perturbations") {
  const ArcSet E({{0.0, pi}});
  const EquilibriumResult r = equilibrium_measure(E, 64);
  const Eigen::MatrixXd K = kernels::cell_kernel_matrix(r.cells);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(r.measure.weights().data(), 64);
  const double base = w.dot(K * w);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 63);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v = w;
    const int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    const double eps = 0.2 * std::min(v[i], v[j]);
    v[i] += eps;
    v[j] -= eps;
    CHECK(v.dot(K * v) >= base - 1e-12);
  }
}

TEST_CASE("equilibrium on an arc matches the closed form") {
  const EquilibriumResult r = equilibrium_measure(ArcSet({{0.0, pi}}), 256);
  CHECK(r.energy == doctest::Approx(std::log(2.0 / std::sin(pi / 4))).epsilon(0.02));
  CHECK(r.energy == doctest::Approx(1.0397).epsilon(0.02));
}

TEST_CASE("two antipodal atoms") {
  const SimplexQpResult r = equilibrium_on_atoms({0.0, pi});
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(r.value) <= 1e-12);
}

TEST_CASE("simplex projection") {
  Eigen::VectorXd v(4);
  v << 0.3, -1.0, 2.0, 0.1;
  const Eigen::VectorXd p = project_to_simplex(v);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.minCoeff() >= 0.0);
  // projection onto a convex set: ⟨v - p, q - p⟩ ≤ 0 for simplex vertices q
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(4);
    q[k] = 1.0;
    CHECK((v - p).dot(q - p) <= 1e-12);
  }
}

TEST_CASE("capacity brackets") {
  const CapacityEstimate full = capacity_estimate(ArcSet::full_circle(), 512);
  CHECK(full.lower <= full.upper);
  CHECK(full.lower == doctest::Approx(1.0 / std::log(2.0)).epsilon(0.02));
  CHECK(full.upper == doctest::Approx(1.0 / std::log(2.0)).epsilon(0.02));
  const CapacityEstimate half = capacity_estimate(ArcSet({{0.0, pi}}), 256);
  CHECK(half.lower <= oracle::arc_capacity(pi) * 1.03);
  CHECK(half.upper >= oracle::arc_capacity(pi) * 0.97);
  CHECK(half.lower == doctest::Approx(0.9618).epsilon(0.03));
  CHECK(half.upper == doctest::Approx(0.9618).epsilon(0.03));
  CHECK(arc_capacity_closed_form(kTwoPi) == doctest::Approx(full_circle_capacity()).epsilon(1e-15));
}

TEST_CASE("capacity is monotone under inclusion") {
  const CapacityEstimate small = capacity_estimate(ArcSet({{0.5, 1.0}}), 128);
  const CapacityEstimate big = capacity_estimate(ArcSet({{0.2, 2.0}}), 128);
  CHECK(small.lower <= big.upper);
  CHECK(small.upper <= big.upper);
}

TEST_CASE("minimal energy points") {
  const PointConfiguration two = minimal_energy_points(ArcSet::full_circle(), 2);
  CHECK(oracle::circle_gap(two.points[0], two.points[1]) == doctest::Approx(pi).epsilon(1e-9));
  CHECK(std::abs(two.energy) <= 1e-12);
  const PointConfiguration four = minimal_energy_points(ArcSet::full_circle(), 4);
  CHECK(four.energy == doctest::Approx(std::log(2.0) / 3.0).epsilon(1e-6));
  // energies grow toward the equilibrium energy on the half circle
  const double limit = std::log(2.0 / std::sin(pi / 4));
  double prev = 0.0;
  for (int n : {8, 16, 32, 64}) {
    const PointConfiguration c = minimal_energy_points(ArcSet({{0.0, pi}}), n);
    CHECK(c.energy > prev);
    CHECK(c.energy < limit);
    const std::vector<double> w(n, 1.0 / std::sqrt(n * (n - 1.0)));
    CHECK(c.energy == doctest::Approx(oracle::pair_energy(c.points, w)).epsilon(1e-10));
    prev = c.energy;
  }
  CHECK(prev == doctest::Approx(limit).epsilon(0.05));
}

TEST_CASE("arc set normalization") {
  const ArcSet E({{1.0, 0.5}, {1.2, 0.5}, {3.0, 0.1}});
  REQUIRE(E.arcs().size() == 2);
  CHECK(E.arcs()[0].length == doctest::Approx(0.7));
  CHECK(E.total_length() == doctest::Approx(0.8));
  CHECK(ArcSet::full_circle().is_full_circle());
  CHECK_THROWS_AS(ArcSet(std::vector<Arc>{}), std::invalid_argument);
  CHECK_THROWS_AS(ArcSet({{0.0, -1.0}}), std::invalid_argument);
}

}  // TEST_SUITE
