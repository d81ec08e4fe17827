#include "weldlab/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weldlab {

namespace {

constexpr double kPoleTol = 1e-14;
constexpr double kDiscriminantTol = 1e-12;

double max_modulus(const std::array<Complex, 4>& m) {
  double s = 0.0;
  for (const auto& v : m) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

double chordal_distance(const ExtComplex& p, const ExtComplex& q) {
  if (p.is_infinite() && q.is_infinite()) return 0.0;
  if (p.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(q.value()));
  if (q.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(p.value()));
  return 2.0 * std::abs(p.value() - q.value()) /
         std::sqrt((1.0 + std::norm(p.value())) * (1.0 + std::norm(q.value())));
}

MoebiusMap::MoebiusMap() : m_{Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)} {}

MoebiusMap::MoebiusMap(Complex a, Complex b, Complex c, Complex d) : m_{a, b, c, d} {
  if (a * d - b * c == Complex(0.0)) {
    throw std::invalid_argument("MoebiusMap: degenerate coefficients (ad - bc = 0)");
  }
  const double s = max_modulus(m_);
  for (auto& v : m_) v /= s;
}

ExtComplex MoebiusMap::apply(const ExtComplex& z) const {
  const auto& [a, b, c, d] = m_;
  if (z.is_infinite()) {
    if (std::abs(c) <= kPoleTol * std::max(std::abs(a), 1e-300)) return ExtComplex::infinity();
    return ExtComplex(a / c);
  }
  const Complex zv = z.value();
  if (std::abs(zv) <= 1.0) {
    const Complex den = c * zv + d;
    const double scale = std::abs(c * zv) + std::abs(d);
    if (std::abs(den) < kPoleTol * scale) return ExtComplex::infinity();
    return ExtComplex((a * zv + b) / den);
  }
  // reciprocal chart: (a + b u) / (c + d u), u = 1/z
  const Complex u = 1.0 / zv;
  const Complex den = c + d * u;
  const double scale = std::abs(c) + std::abs(d * u);
  if (std::abs(den) < kPoleTol * scale) return ExtComplex::infinity();
  return ExtComplex((a + b * u) / den);
}

Complex MoebiusMap::apply_finite(Complex z) const {
  const ExtComplex w = apply(ExtComplex(z));
  if (w.is_infinite()) return {1e300, 0.0};
  return w.value();
}

MoebiusMap MoebiusMap::inverse() const { return {m_[3], -m_[1], -m_[2], m_[0]}; }

bool MoebiusMap::approx_equal(const MoebiusMap& other, double tol) const {
  // Best scalar λ with this ≈ λ·other, then compare.
  Complex num(0.0), den(0.0);
  for (int k = 0; k < 4; ++k) {
    num += std::conj(other.m_[k]) * m_[k];
    den += std::norm(other.m_[k]);
  }
  const Complex lambda = num / den;
  double err = 0.0;
  for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(m_[k] - lambda * other.m_[k]));
  return err <= tol;
}

MoebiusMap compose(const MoebiusMap& A, const MoebiusMap& B) {
  return {A.a() * B.a() + A.b() * B.c(), A.a() * B.b() + A.b() * B.d(),
          A.c() * B.a() + A.d() * B.c(), A.c() * B.b() + A.d() * B.d()};
}

MoebiusMap inverse(const MoebiusMap& A) { return A.inverse(); }

ExtComplex apply(const MoebiusMap& A, const ExtComplex& z) { return A.apply(z); }

MoebiusMap cayley() {
  const Complex i(0.0, 1.0);
  return {1.0, -i, 1.0, i};
}

MoebiusMap conjugated_translation(double t) {
  // φ ∘ (z + t) ∘ φ⁻¹ in closed form: with φ⁻¹ = [[i, i], [-1, 1]] the product is
  // [[2 + i t, -i t], [i t, 2 - i t]] up to scale.
  const Complex it(0.0, t);
  return {2.0 + it, -it, it, 2.0 - it};
}

MoebiusMap parabolic_disk(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("parabolic_disk: requires a > 0");
  return conjugated_translation(a);
}

FixedPointSet fixed_points(const MoebiusMap& A) {
  const auto [a, b, c, d] = A.coefficients();
  FixedPointSet out;
  if (std::abs(b) <= kDiscriminantTol && std::abs(c) <= kDiscriminantTol &&
      std::abs(a - d) <= kDiscriminantTol) {
    out.all = true;
    return out;
  }
  if (std::abs(c) <= kDiscriminantTol) {
    out.points.push_back(ExtComplex::infinity());
    if (std::abs(d - a) > kDiscriminantTol) out.points.emplace_back(b / (d - a));
    return out;
  }
  const Complex disc = (d - a) * (d - a) + 4.0 * b * c;
  if (std::abs(disc) < kDiscriminantTol) {
    out.points.emplace_back((a - d) / (2.0 * c));
    return out;
  }
  const Complex root = std::sqrt(disc);
  out.points.emplace_back((a - d + root) / (2.0 * c));
  out.points.emplace_back((a - d - root) / (2.0 * c));
  return out;
}

namespace {

bool coincide(const ExtComplex& p, const ExtComplex& q) {
  if (p.is_infinite() || q.is_infinite()) return p.is_infinite() && q.is_infinite();
  const double scale = std::max({1.0, std::abs(p.value()), std::abs(q.value())});
  return std::abs(p.value() - q.value()) <= 1e-14 * scale;
}

// Map sending (z1, z2, z3) to (0, 1, ∞).
MoebiusMap to_standard_triple(const std::array<ExtComplex, 3>& z) {
  if (coincide(z[0], z[1]) || coincide(z[1], z[2]) || coincide(z[0], z[2])) {
    throw std::invalid_argument("fit_three_points: coincident points in a triple");
  }
  if (z[0].is_infinite()) {
    const Complex z2 = z[1].value(), z3 = z[2].value();
    return {0.0, z2 - z3, 1.0, -z3};
  }
  if (z[1].is_infinite()) {
    const Complex z1 = z[0].value(), z3 = z[2].value();
    return {1.0, -z1, 1.0, -z3};
  }
  if (z[2].is_infinite()) {
    const Complex z1 = z[0].value(), z2 = z[1].value();
    return {1.0, -z1, 0.0, z2 - z1};
  }
  const Complex z1 = z[0].value(), z2 = z[1].value(), z3 = z[2].value();
  return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

}  // namespace

MoebiusMap fit_three_points(const std::array<ExtComplex, 3>& src,
                            const std::array<ExtComplex, 3>& dst) {
  return compose(to_standard_triple(dst).inverse(), to_standard_triple(src));
}

Complex cross_ratio(Complex z1, Complex z2, Complex z3, Complex z4) {
  return ((z1 - z3) * (z2 - z4)) / ((z2 - z3) * (z1 - z4));
}

DiskAutomorphism::DiskAutomorphism(double alpha, Complex w) : w_(w) {
  if (!(std::abs(w) < 1.0)) throw std::invalid_argument("DiskAutomorphism: requires |w| < 1");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  alpha_ = std::fmod(alpha, two_pi);
  if (alpha_ < 0.0) alpha_ += two_pi;
}

MoebiusMap DiskAutomorphism::to_moebius() const {
  const Complex rot = std::polar(1.0, alpha_);
  return {rot, -rot * w_, -std::conj(w_), 1.0};
}

double DiskAutomorphism::act_on_angle(double theta) const {
  const Complex z = std::polar(1.0, theta);
  const Complex v = std::polar(1.0, alpha_) * (z - w_) / (1.0 - std::conj(w_) * z);
  double t = std::arg(v);
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  return t;
}

bool preserves_unit_circle(const MoebiusMap& A, int samples, double tol) {
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / samples;
    const ExtComplex w = A.apply(ExtComplex(std::polar(1.0, t)));
    if (w.is_infinite() || std::abs(std::abs(w.value()) - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace weldlab
