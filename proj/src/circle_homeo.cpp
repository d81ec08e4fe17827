#include "weldlab/circle_homeo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace weldlab {

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

double circle_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

double boundary_angle(const MoebiusMap& M, double theta) {
  const ExtComplex w = M.apply(std::polar(1.0, theta));
  if (w.is_infinite()) throw std::invalid_argument("boundary_angle: map sends the circle to ∞");
  return wrap_angle(std::arg(w.value()));
}

SampleGrid::SampleGrid(int n, double off) : count(n), offset(off) {
  if (n < 1) throw std::invalid_argument("SampleGrid: count must be >= 1");
}

CircleHomeo::CircleHomeo(std::vector<Breakpoint> breakpoints) : bp_(std::move(breakpoints)) {
  if (bp_.size() >= 2) {
    const Breakpoint& first = bp_.front();
    const Breakpoint& last = bp_.back();
    if (last.theta - first.theta == kTwoPi && last.psi - first.psi == kTwoPi) bp_.pop_back();
  }
  if (bp_.size() < 2) throw std::invalid_argument("CircleHomeo: needs at least 2 breakpoints");
  for (std::size_t k = 0; k < bp_.size(); ++k) {
    if (!std::isfinite(bp_[k].theta) || !std::isfinite(bp_[k].psi)) {
      throw std::invalid_argument("CircleHomeo: non-finite breakpoint");
    }
    if (k > 0 && !(bp_[k].theta > bp_[k - 1].theta && bp_[k].psi > bp_[k - 1].psi)) {
      throw std::invalid_argument("CircleHomeo: breakpoints not strictly increasing");
    }
  }
  if (!(bp_.back().theta - bp_.front().theta < kTwoPi) ||
      !(bp_.back().psi - bp_.front().psi < kTwoPi)) {
    throw std::invalid_argument("CircleHomeo: breakpoints span a full period");
  }
  const double shift = kTwoPi * std::floor(bp_.front().theta / kTwoPi);
  if (shift != 0.0) {
    for (auto& b : bp_) {
      b.theta -= shift;
      b.psi -= shift;
    }
  }
}

CircleHomeo CircleHomeo::identity() {
  return CircleHomeo({{0.0, 0.0}, {std::numbers::pi, std::numbers::pi}});
}

CircleHomeo CircleHomeo::rotation(double alpha) {
  return CircleHomeo({{0.0, alpha}, {std::numbers::pi, std::numbers::pi + alpha}});
}

double CircleHomeo::evaluate_lift(double theta) const {
  const double base = bp_.front().theta;
  const double m = std::floor((theta - base) / kTwoPi);
  double t = theta - m * kTwoPi;
  if (t < base) t = base;
  const auto it = std::upper_bound(bp_.begin(), bp_.end(), t,
                                   [](double v, const Breakpoint& b) { return v < b.theta; });
  const std::size_t k = static_cast<std::size_t>(it - bp_.begin()) - 1;
  const Breakpoint lo = bp_[k];
  const Breakpoint hi = (k + 1 < bp_.size())
                            ? bp_[k + 1]
                            : Breakpoint{bp_.front().theta + kTwoPi, bp_.front().psi + kTwoPi};
  double psi;
  if (t == lo.theta) {
    psi = lo.psi;
  } else {
    const double s = (t - lo.theta) / (hi.theta - lo.theta);
    psi = lo.psi + s * (hi.psi - lo.psi);
  }
  return psi + m * kTwoPi;
}

double CircleHomeo::mesh() const {
  double gap = bp_.front().psi + kTwoPi - bp_.back().psi;
  for (std::size_t k = 1; k < bp_.size(); ++k) gap = std::max(gap, bp_[k].psi - bp_[k - 1].psi);
  return gap;
}

CircleHomeo invert(const CircleHomeo& h) {
  std::vector<Breakpoint> bp;
  bp.reserve(h.size());
  for (const auto& b : h.breakpoints()) bp.push_back({b.psi, b.theta});
  return CircleHomeo(std::move(bp));
}

CircleHomeo compose_homeo(const CircleHomeo& h1, const CircleHomeo& h2) {
  const double base = h2.breakpoints().front().theta;
  std::vector<double> grid;
  grid.reserve(h1.size() + h2.size());
  for (const auto& b : h2.breakpoints()) grid.push_back(b.theta);
  const CircleHomeo h2inv = invert(h2);
  for (const auto& b : h1.breakpoints()) {
    double s = h2inv.evaluate_lift(b.theta);
    s -= kTwoPi * std::floor((s - base) / kTwoPi);
    if (s >= base + kTwoPi) s -= kTwoPi;
    grid.push_back(s);
  }
  std::sort(grid.begin(), grid.end());
  std::vector<Breakpoint> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const double psi = h1.evaluate_lift(h2.evaluate_lift(t));
    if (!out.empty() && (t - out.back().theta <= 1e-15 * (1.0 + std::abs(t)) ||
                         psi <= out.back().psi)) {
      continue;
    }
    out.push_back({t, psi});
  }
  while (out.size() > 2 && out.back().psi - out.front().psi >= kTwoPi) out.pop_back();
  return CircleHomeo(std::move(out));
}

CircleHomeo from_boundary_action(const MoebiusMap& A, const SampleGrid& grid) {
  std::vector<Breakpoint> bp;
  bp.reserve(static_cast<std::size_t>(grid.count));
  double prev_raw = 0.0;
  double lift = 0.0;
  for (int k = 0; k < grid.count; ++k) {
    const double t = grid.angle(k);
    const ExtComplex w = A.apply(ExtComplex(std::polar(1.0, t)));
    if (w.is_infinite() || std::abs(std::abs(w.value()) - 1.0) > 1e-10) {
      throw std::invalid_argument("from_boundary_action: map does not preserve the unit circle");
    }
    const double raw = std::arg(w.value());
    if (k == 0) {
      lift = raw;
    } else {
      lift += wrap_angle(raw - prev_raw);
    }
    prev_raw = raw;
    bp.push_back({t, lift});
  }
  if (grid.count >= 2) {
    const double closing = wrap_angle(bp.front().psi - prev_raw);
    const double total = bp.back().psi + closing - bp.front().psi;
    if (std::abs(total - kTwoPi) > 1e-9) {
      throw std::invalid_argument("from_boundary_action: map is not orientation-preserving");
    }
  } else {
    bp.push_back({bp.front().theta + std::numbers::pi, bp.front().psi + std::numbers::pi});
  }
  return CircleHomeo(std::move(bp));
}

double sup_distance_serial(const CircleHomeo& h1, const CircleHomeo& h2, const SampleGrid& grid) {
  double best = 0.0;
  for (int k = 0; k < grid.count; ++k) {
    const double t = grid.angle(k);
    best = std::max(best, circle_distance(h1.evaluate_lift(t), h2.evaluate_lift(t)));
  }
  return best;
}

double sup_distance(const CircleHomeo& h1, const CircleHomeo& h2, const SampleGrid& grid) {
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (int k = 0; k < grid.count; ++k) {
    const double t = grid.angle(k);
    best = std::max(best, circle_distance(h1.evaluate_lift(t), h2.evaluate_lift(t)));
  }
  return best;
}

double quasisymmetry_modulus(const CircleHomeo& h, double scale) {
  if (!(scale > 0.0 && scale < std::numbers::pi)) {
    throw std::invalid_argument("quasisymmetry_modulus: requires 0 < scale < pi");
  }
  const int starts = static_cast<int>(std::ceil(kTwoPi / scale));
  double worst = 1.0;
  for (int k = 0; k < starts; ++k) {
    const double t = k * scale;
    const double p0 = h.evaluate_lift(t);
    const double p1 = h.evaluate_lift(t + scale);
    const double p2 = h.evaluate_lift(t + 2.0 * scale);
    const double li = p1 - p0;
    const double lj = p2 - p1;
    worst = std::max(worst, std::max(li / lj, lj / li));
  }
  return worst;
}

std::vector<double> approximate_fixed_angles(const CircleHomeo& h, const SampleGrid& grid,
                                             double tol) {
  auto displacement = [&](double t) {
    double d = wrap_angle(h.evaluate_lift(t) - t);
    if (d > std::numbers::pi) d -= kTwoPi;
    return d;
  };
  std::vector<double> out;
  for (int k = 0; k < grid.count; ++k) {
    const double t = grid.angle(k);
    const double d0 = displacement(t);
    const double d1 = displacement(grid.angle(k + 1));
    if (std::abs(d0) <= tol) {
      out.push_back(t);
    } else if (std::abs(d1) > tol && d0 * d1 < 0.0 && std::abs(d0 - d1) < std::numbers::pi) {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace weldlab
