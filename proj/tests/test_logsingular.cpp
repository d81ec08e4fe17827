#include "doctest.h"

#include <numbers>

#include "oracles.hpp"
#include "weldlab/logsingular.hpp"

using namespace weldlab;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_SUITE("logsingular") {

TEST_CASE("depth one certifies the first red subarc") {
  const LogSingularMap m = build_log_singular({0.0, pi}, {0.0, pi}, 1);
  REQUIRE(m.realized_depth() == 1);
  const CertificateReport c = certificate_check(m, 128);
  REQUIRE(c.stages.size() == 1);
  CHECK(c.stages[0].budget == 0.5);
  CHECK(c.stages[0].red_upper <= 0.5 * 1.05);
  CHECK(c.stages[0].red_pass);
  // closed form of every red part, summed, against the same budget
  double sum = 0.0;
  for (const TaggedArc& a : m.stages[0].parts) {
    if (a.tag == Tag::red) sum += oracle::arc_capacity(a.length);
  }
  CHECK(sum <= 0.5);
}

TEST_CASE("endpoints are preserved at every stage") {
  const Arc I{0.5, 2.0}, J{3.0, 1.5};
  const LogSingularMap m = build_log_singular(I, J, 6);
  for (const CircleHomeo& h : m.maps()) {
    CHECK(h.evaluate_lift(I.start) == doctest::Approx(J.start).epsilon(1e-15));
    CHECK(h.evaluate_lift(I.end()) == doctest::Approx(J.end()).epsilon(1e-15));
  }
}

TEST_CASE("stage pieces tile the domain and the target") {
  const LogSingularMap m = build_log_singular({0.0, pi}, {0.0, pi}, 6);
  const auto maps = m.maps();
  for (std::size_t n = 0; n < m.stages.size(); ++n) {
    const RedBlueStage& s = m.stages[n];
    const CircleHomeo& next = maps[n + 1];
    double dom = 0.0, img = 0.0;
    for (const TaggedArc& a : s.parts) {
      dom += a.length;
      img += a.image_length;
      CHECK(next.evaluate_lift(a.start) == doctest::Approx(a.image_start).epsilon(1e-15));
      CHECK(next.evaluate_lift(a.end()) == doctest::Approx(a.image_end()).epsilon(1e-15));
    }
    CHECK(dom == doctest::Approx(pi).epsilon(1e-13));
    CHECK(img == doctest::Approx(pi).epsilon(1e-13));
  }
}

TEST_CASE("depth six is truncated by floating point resolution") {
  const LogSingularMap m = build_log_singular({0.0, pi}, {0.0, pi}, 6);
  CHECK(m.requested_depth == 6);
  CHECK(m.truncated);
  CHECK(m.realized_depth() >= 2);
  CHECK(m.realized_depth() < 6);
  // stage n+1 needs a red length of about 4·exp(-1/budget), budget = 2^{-(n+1)}/pieces
  const std::size_t pieces = m.stages.back().parts.size() * (m.realized_depth() + 1);
  const double budget = std::ldexp(1.0, -(m.realized_depth() + 1)) / pieces;
  CHECK(4.0 * std::exp(-1.0 / budget) < 1e-14);
}

TEST_CASE("certificates of the built stages") {
  const LogSingularMap m = build_log_singular({0.0, pi}, {0.0, pi}, 4);
  const CertificateReport c = certificate_check(m, 128);
  REQUIRE(c.stages.size() == static_cast<std::size_t>(m.realized_depth()));
  for (std::size_t k = 0; k < c.stages.size(); ++k) {
    CHECK(c.stages[k].budget == std::ldexp(1.0, -static_cast<int>(k + 1)));
    CHECK(c.stages[k].red_pass);
    CHECK(c.stages[k].blue_pass);
  }
  CHECK(c.requested_depth == 4);
  CHECK_FALSE(c.all_pass());
}

TEST_CASE("tail bound") {
  CHECK(tail_bound(3) == 0.25);
  CHECK(tail_bound(1) == 1.0);
  double partial = 0.0;
  for (int n = 5; n < 60; ++n) partial += std::ldexp(1.0, -n);
  CHECK(tail_bound(5) == doctest::Approx(partial).epsilon(1e-15));
}

TEST_CASE("doubling the red arcs breaks a certificate") {
  const LogSingularMap m = build_log_singular({0.0, pi}, {0.0, pi}, 4);
  const LogSingularMap bad = with_scaled_red(m, 2.0);
  const CertificateReport c = certificate_check(bad, 128);
  bool any_fail = false;
  for (const StageCertificate& s : c.stages) any_fail = any_fail || !s.red_pass || !s.blue_pass;
  CHECK(any_fail);
  // independent check: closed-form capacity of the doubled first-stage red arc
  double sum = 0.0;
  for (const TaggedArc& a : bad.stages[0].parts) {
    if (a.tag == Tag::red) sum += oracle::arc_capacity(a.length);
  }
  CHECK(sum > 0.5);
}

TEST_CASE("convergence profile") {
  const LogSingularMap m = build_log_singular({0.0, pi}, {0.0, pi}, 6);
  const auto p = convergence_profile(m);
  REQUIRE(p.size() == static_cast<std::size_t>(m.realized_depth()));
  for (std::size_t k = 0; k < p.size(); ++k) {
    CHECK(p[k] <= m.stages[k].max_image_length + 1e-12);
    if (k > 0) CHECK(p[k] < p[k - 1]);
  }
  // telescoping: entries dominate the distance to the final map
  const auto maps = m.maps();
  for (std::size_t n = 0; n + 1 < maps.size(); ++n) {
    double tail = 0.0;
    for (std::size_t k = n; k < p.size(); ++k) tail += p[k];
    CHECK(sup_distance_exact(maps[n], maps.back()) <= tail + 1e-12);
  }
  // the exact sup is attained at breakpoints; a dense grid never exceeds it
  CHECK(sup_distance(maps[0], maps[1], SampleGrid(50000, 1e-6)) <= sup_distance_exact(maps[0], maps[1]) + 1e-15);
}

TEST_CASE("degenerate stages give a vanishing profile") {
  LogSingularMap m;
  m.domain = {0.0, pi};
  m.target = {0.0, pi};
  m.requested_depth = 3;
  for (int n = 1; n <= 3; ++n) {
    RedBlueStage s;
    s.index = n;
    s.map = arc_linear_map(m.domain, m.target);
    m.stages.push_back(s);
  }
  m.h = CircleHomeo::identity();
  for (double d : convergence_profile(m)) CHECK(d == 0.0);
}

TEST_CASE("arc linear map") {
  const CircleHomeo h = arc_linear_map({1.0, 2.0}, {3.0, 1.0});
  CHECK(h.evaluate_lift(1.0) == doctest::Approx(3.0));
  CHECK(h.evaluate_lift(2.0) == doctest::Approx(3.5));
  CHECK(h.evaluate_lift(3.0) == doctest::Approx(4.0));
}

TEST_CASE("invalid builds") {
  CHECK_THROWS_AS(build_log_singular({0.0, 0.0}, {0.0, 1.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_log_singular({0.0, 1.0}, {0.0, kTwoPi}, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_log_singular({0.0, 1.0}, {0.0, 1.0}, 0), std::invalid_argument);
}

}  // TEST_SUITE
