#include "weldlab/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weldlab {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

int orient(Complex a, Complex b, Complex c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

PolygonCurve::PolygonCurve(std::vector<Complex> vertices) : v_(std::move(vertices)) {
  const std::size_t n = v_.size();
  if (n < 3) throw std::invalid_argument("PolygonCurve: needs at least 3 vertices");
  for (const Complex& z : v_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("PolygonCurve: non-finite vertex");
    }
  }
  cum_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double len = std::abs(vertex(k + 1) - v_[k]);
    if (!(len > 1e-12)) throw std::invalid_argument("PolygonCurve: collapsed edge");
    cum_[k + 1] = cum_[k] + len;
  }
  // segment-pair sweep over edges sorted by left x-coordinate
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  auto left = [&](std::size_t k) { return std::min(v_[k].real(), vertex(k + 1).real()); };
  auto right = [&](std::size_t k) { return std::max(v_[k].real(), vertex(k + 1).real()); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return left(a) < left(b) || (left(a) == left(b) && a < b);
  });
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t e = order[i];
    for (std::size_t j = i + 1; j < n && left(order[j]) <= right(e); ++j) {
      const std::size_t f = order[j];
      const std::size_t lo = std::min(e, f);
      const std::size_t hi = std::max(e, f);
      const bool adjacent = (hi == lo + 1) || (lo == 0 && hi == n - 1);
      if (adjacent) {
        // neighbours share a vertex; they may only touch there
        const std::size_t first = (lo == 0 && hi == n - 1) ? hi : lo;
        const std::size_t second = (first == hi) ? lo : hi;
        const Complex a = vertex(first), b = vertex(first + 1), c = vertex(second + 1);
        if (orient(a, b, c) == 0 && std::real((c - b) * std::conj(a - b)) > 0.0) {
          throw std::invalid_argument("PolygonCurve: edges fold back onto each other");
        }
        continue;
      }
      if (segments_intersect(vertex(e), vertex(e + 1), vertex(f), vertex(f + 1))) {
        throw std::invalid_argument("PolygonCurve: polygon is not simple");
      }
    }
  }
  if (!(signed_area() > 0.0)) {
    throw std::invalid_argument("PolygonCurve: polygon must be positively oriented");
  }
}

PolygonCurve PolygonCurve::regular(int n, double radius, Complex center, double phase) {
  if (n < 3) throw std::invalid_argument("PolygonCurve::regular: n must be >= 3");
  if (!(radius > 0.0)) throw std::invalid_argument("PolygonCurve::regular: radius must be > 0");
  std::vector<Complex> v(n);
  for (int k = 0; k < n; ++k) {
    v[k] = center + std::polar(radius, phase + 2.0 * std::numbers::pi * k / n);
  }
  return PolygonCurve(std::move(v));
}

double PolygonCurve::signed_area() const {
  double s = 0.0;
  for (std::size_t k = 0; k < v_.size(); ++k) s += cross(v_[k], vertex(k + 1));
  return 0.5 * s;
}

Complex PolygonCurve::centroid() const {
  Complex c = 0.0;
  double a = 0.0;
  const Complex o = v_[0];
  for (std::size_t k = 0; k < v_.size(); ++k) {
    const Complex p = v_[k] - o, q = vertex(k + 1) - o;
    const double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  return o + c / (3.0 * a);
}

bool PolygonCurve::contains(Complex z) const {
  bool inside = false;
  const std::size_t n = v_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = v_[k], b = vertex(k + 1);
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      const double x = a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

Complex PolygonCurve::interior_point() const {
  const Complex c = centroid();
  if (contains(c)) return c;
  const double y = c.imag();
  std::vector<double> xs;
  for (std::size_t k = 0; k < v_.size(); ++k) {
    const Complex a = v_[k], b = vertex(k + 1);
    if ((a.imag() > y) != (b.imag() > y)) {
      xs.push_back(a.real() + (y - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real()));
    }
  }
  std::sort(xs.begin(), xs.end());
  double best = -1.0;
  Complex out = c;
  for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
    if (xs[k + 1] - xs[k] > best) {
      best = xs[k + 1] - xs[k];
      out = {0.5 * (xs[k] + xs[k + 1]), y};
    }
  }
  if (!(best > 0.0) || !contains(out)) {
    throw std::invalid_argument("PolygonCurve: no interior point found");
  }
  return out;
}

Complex PolygonCurve::point(const BoundaryPosition& p) const {
  const std::size_t k = static_cast<std::size_t>(p.edge) % v_.size();
  const Complex a = v_[k], b = vertex(k + 1);
  return a + p.fraction * (b - a);
}

double PolygonCurve::arclength(const BoundaryPosition& p) const {
  const std::size_t k = static_cast<std::size_t>(p.edge) % v_.size();
  return cum_[k] + p.fraction * edge_length(k);
}

BoundaryPosition PolygonCurve::position_at_arclength(double s) const {
  const double L = perimeter();
  double t = std::fmod(s, L);
  if (t < 0.0) t += L;
  if (t >= L) t = 0.0;
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - cum_.begin()) - 1;
  if (k >= v_.size()) k = v_.size() - 1;
  double f = (t - cum_[k]) / edge_length(k);
  f = std::clamp(f, 0.0, std::nextafter(1.0, 0.0));
  return {static_cast<int>(k), f};
}

PolygonCurve PolygonCurve::translated(Complex c) const {
  std::vector<Complex> v(v_);
  for (Complex& z : v) z += c;
  return PolygonCurve(std::move(v));
}

PolygonCurve PolygonCurve::transformed(const MoebiusMap& T) const {
  std::vector<Complex> v;
  v.reserve(v_.size());
  for (const Complex& z : v_) {
    const ExtComplex w = T.apply(z);
    if (w.is_infinite()) throw std::invalid_argument("PolygonCurve::transformed: vertex sent to ∞");
    v.push_back(w.value());
  }
  return PolygonCurve(std::move(v));
}

double PolygonCurve::turning_angle(std::size_t k) const {
  const Complex in = vertex(k) - vertex(k + v_.size() - 1);
  const Complex out = vertex(k + 1) - vertex(k);
  return std::arg(out / in);
}

std::vector<BoundaryPosition> sample_boundary(const PolygonCurve& P, int resolution,
                                              Grading grading) {
  const std::size_t n = P.size();
  if (resolution < static_cast<int>(n)) {
    throw std::invalid_argument("sample_boundary: resolution below vertex count");
  }
  // grading exponent per vertex: 1 (uniform) up to 2 for a corner of angle 3π/2 or more
  // on the mapped side
  std::vector<double> q(n, 1.0);
  if (grading != Grading::uniform) {
    const double sign = (grading == Grading::exterior) ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      q[k] = 1.0 + std::clamp(sign * P.turning_angle(k) / (0.5 * std::numbers::pi), 0.0, 1.0);
    }
  }
  const std::size_t extra = static_cast<std::size_t>(resolution) - n;
  std::vector<std::size_t> count(n, 0);
  std::vector<std::pair<double, std::size_t>> remainder(n);
  std::size_t used = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double share = extra * P.edge_length(k) / P.perimeter();
    count[k] = static_cast<std::size_t>(std::floor(share));
    used += count[k];
    remainder[k] = {share - count[k], k};
  }
  std::stable_sort(remainder.begin(), remainder.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; used < extra; ++j, ++used) ++count[remainder[j % n].second];

  std::vector<BoundaryPosition> out;
  out.reserve(resolution);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = count[k];
    const double q0 = q[k];
    const double q1 = q[(k + 1) % n];
    for (std::size_t j = 0; j <= m; ++j) {
      const double u = static_cast<double>(j) / static_cast<double>(m + 1);
      const double f = (u < 0.5) ? 0.5 * std::pow(2.0 * u, q0)
                                 : 1.0 - 0.5 * std::pow(2.0 * (1.0 - u), q1);
      out.push_back({static_cast<int>(k), f});
    }
  }
  return out;
}

}  // namespace weldlab
