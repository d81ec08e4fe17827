#include "weldlab/equivariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weldlab {

void EquivariantSpec::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("EquivariantSpec: a and b must be positive");
  }
  if (orbits < 1) throw std::invalid_argument("EquivariantSpec: orbit range must be >= 1");
  if (seed == SeedKind::log_singular && seed_depth < 1) {
    throw std::invalid_argument("EquivariantSpec: seed_depth must be >= 1");
  }
  if (!(refine_spacing > 0.0)) {
    throw std::invalid_argument("EquivariantSpec: refine_spacing must be positive");
  }
  if (!(guard > 0.0)) throw std::invalid_argument("EquivariantSpec: guard must be positive");
  const double outer_a = cayley_angle(-orbits * a + a) - cayley_angle(-orbits * a);
  const double outer_b = cayley_angle(-orbits * b + b) - cayley_angle(-orbits * b);
  if (!(guard < std::min(outer_a, outer_b))) {
    throw std::invalid_argument("EquivariantSpec: guard exceeds the outermost orbit arc");
  }
}

double cayley_angle(double x) {
  if (x == -INFINITY) return 0.0;
  if (x == INFINITY) return kTwoPi;
  return std::numbers::pi + 2.0 * std::atan(x);
}

double cayley_coordinate(double theta) { return std::tan(0.5 * (theta - std::numbers::pi)); }

double parabolic_angle_power(double theta, double a, int n) {
  return cayley_angle(cayley_coordinate(theta) + n * a);
}

double OrbitDecomposition::total_length_I() const {
  double s = 0.0;
  for (const Arc& x : I) s += x.length;
  return s;
}

double OrbitDecomposition::total_length_J() const {
  double s = 0.0;
  for (const Arc& x : J) s += x.length;
  return s;
}

bool OrbitDecomposition::disjoint(double tol) const {
  for (const auto* arcs : {&I, &J}) {
    for (std::size_t k = 0; k < arcs->size(); ++k) {
      const Arc& x = (*arcs)[k];
      if (!(x.length > 0.0)) return false;
      if (k > 0 && x.start < (*arcs)[k - 1].end() - tol) return false;
    }
    if (!arcs->empty() && arcs->back().end() - arcs->front().start > kTwoPi + tol) return false;
  }
  return true;
}

std::vector<Arc> orbit_arcs(double a, int N) {
  if (!(a > 0.0)) throw std::invalid_argument("orbit_arcs: a must be positive");
  if (N < 0) throw std::invalid_argument("orbit_arcs: N must be >= 0");
  std::vector<Arc> out;
  out.reserve(2 * N + 1);
  double lo = cayley_angle(-N * a);
  for (int n = -N; n <= N; ++n) {
    const double hi = cayley_angle((n + 1) * a);
    out.push_back({lo, hi - lo});
    lo = hi;
  }
  return out;
}

OrbitDecomposition orbit_arcs(const EquivariantSpec& spec) {
  spec.validate();
  OrbitDecomposition d;
  d.orbits = spec.orbits;
  d.I = orbit_arcs(spec.a, spec.orbits);
  d.J = orbit_arcs(spec.b, spec.orbits);
  return d;
}

namespace {

std::vector<Breakpoint> refine(const std::vector<Breakpoint>& pts, double spacing) {
  std::vector<Breakpoint> out;
  out.reserve(pts.size());
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Breakpoint p = pts[k];
    const Breakpoint q = pts[k + 1];
    out.push_back(p);
    const double gap = std::max(q.theta - p.theta, q.psi - p.psi);
    const int parts = static_cast<int>(std::ceil(gap / spacing));
    for (int j = 1; j < parts; ++j) {
      const double s = static_cast<double>(j) / parts;
      const Breakpoint r{p.theta + s * (q.theta - p.theta), p.psi + s * (q.psi - p.psi)};
      if (r.theta > out.back().theta && r.psi > out.back().psi && r.theta < q.theta &&
          r.psi < q.psi) {
        out.push_back(r);
      }
    }
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace

EquivariantResult build_equivariant(const EquivariantSpec& spec) {
  spec.validate();
  EquivariantResult res;
  res.spec = spec;
  res.orbits = orbit_arcs(spec);

  const Arc I0{std::numbers::pi, cayley_angle(spec.a) - std::numbers::pi};
  const Arc J0{std::numbers::pi, cayley_angle(spec.b) - std::numbers::pi};
  CircleHomeo seed = arc_linear_map(I0, J0);
  if (spec.seed == SeedKind::log_singular) {
    res.seed_map = build_log_singular(I0, J0, spec.seed_depth);
    seed = res.seed_map->h;
  }

  std::vector<Breakpoint> on_arc;
  for (const Breakpoint& b : seed.breakpoints()) {
    if (b.theta >= I0.start && b.theta <= I0.end()) on_arc.push_back(b);
  }
  if (on_arc.empty() || on_arc.front().theta != I0.start) {
    on_arc.insert(on_arc.begin(), {I0.start, seed.evaluate_lift(I0.start)});
  }
  if (on_arc.back().theta != I0.end()) on_arc.push_back({I0.end(), seed.evaluate_lift(I0.end())});
  res.seed_breakpoints = refine(on_arc, spec.refine_spacing);
  res.seed_breakpoints.pop_back();

  const std::size_t m = res.seed_breakpoints.size();
  std::vector<double> x(m), y(m);
  for (std::size_t k = 0; k < m; ++k) {
    x[k] = cayley_coordinate(res.seed_breakpoints[k].theta);
    y[k] = cayley_coordinate(res.seed_breakpoints[k].psi);
  }

  const int N = spec.orbits;
  std::vector<std::vector<OrbitBreakpoint>> per_orbit(2 * N + 1);
#pragma omp parallel for schedule(static)
  for (int n = -N; n <= N; ++n) {
    auto& dst = per_orbit[n + N];
    dst.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      dst.push_back({n, k, cayley_angle(x[k] + n * spec.a), cayley_angle(y[k] + n * spec.b)});
    }
  }

  const double lo = spec.guard;
  const double hi = kTwoPi - spec.guard;
  std::vector<Breakpoint> bp{{0.0, 0.0}};
  bp.reserve(m * per_orbit.size() + 1);
  for (const auto& orbit : per_orbit) {
    for (const OrbitBreakpoint& p : orbit) {
      if (p.theta < lo || p.theta > hi || p.psi < lo || p.psi > hi) {
        res.truncated = true;
        continue;
      }
      if (!(p.theta > bp.back().theta && p.psi > bp.back().psi)) {
        res.truncated = true;
        continue;
      }
      bp.push_back({p.theta, p.psi});
      res.transported.push_back(p);
    }
  }
  if (res.transported.empty()) {
    throw std::invalid_argument("build_equivariant: every orbit fell inside the guard band");
  }
  res.window_lo = res.transported.front().theta;
  res.window_hi = res.transported.back().theta;
  res.W = CircleHomeo(std::move(bp));
  return res;
}

CircleHomeo build_equivariant_homeo(const EquivariantSpec& spec) {
  return build_equivariant(spec).W;
}

namespace {

double residual_at(const CircleHomeo& W, const MoebiusMap& sigma, const MoebiusMap& tau,
                   double theta, const ResidualWindow& win) {
  const double t = wrap_angle(theta);
  if (t < win.lo || t > win.hi) return 0.0;
  const double s = boundary_angle(sigma, t);
  if (s < win.lo || s > win.hi) return 0.0;
  return circle_distance(W.evaluate_lift(s), boundary_angle(tau, W.evaluate_lift(t)));
}

}  // namespace

double functional_equation_residual(const CircleHomeo& W, const MoebiusMap& sigma,
                                    const MoebiusMap& tau, const SampleGrid& grid,
                                    const ResidualWindow& window) {
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (int k = 0; k < grid.count; ++k) {
    best = std::max(best, residual_at(W, sigma, tau, grid.angle(k), window));
  }
  return best;
}

double functional_equation_residual_serial(const CircleHomeo& W, const MoebiusMap& sigma,
                                           const MoebiusMap& tau, const SampleGrid& grid,
                                           const ResidualWindow& window) {
  double best = 0.0;
  for (int k = 0; k < grid.count; ++k) {
    best = std::max(best, residual_at(W, sigma, tau, grid.angle(k), window));
  }
  return best;
}

std::vector<double> residual_profile(const CircleHomeo& W, const MoebiusMap& sigma,
                                     const MoebiusMap& tau, const SampleGrid& grid,
                                     const ResidualWindow& window) {
  std::vector<double> out(grid.count);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < grid.count; ++k) out[k] = residual_at(W, sigma, tau, grid.angle(k), window);
  return out;
}

double functional_equation_residual(const EquivariantResult& r, const SampleGrid& grid) {
  return functional_equation_residual(r.W, r.sigma(), r.tau(), grid,
                                      {r.window_lo, r.window_hi});
}

double breakpoint_residual(const EquivariantResult& r) {
  const MoebiusMap sigma = r.sigma();
  const MoebiusMap tau = r.tau();
  const std::size_t m = r.seed_breakpoints.size();
  const int N = r.spec.orbits;
  // transported points indexed by (orbit, seed index); missing ones were truncated
  std::vector<const OrbitBreakpoint*> table((2 * N + 1) * m, nullptr);
  for (const OrbitBreakpoint& p : r.transported) table[(p.orbit + N) * m + p.index] = &p;
  double best = 0.0;
  for (int n = -N + 1; n < N; ++n) {
    for (std::size_t k = 0; k < m; ++k) {
      const OrbitBreakpoint* p = table[(n + N) * m + k];
      const OrbitBreakpoint* q = table[(n + 1 + N) * m + k];
      if (p == nullptr || q == nullptr) continue;
      best = std::max(best, circle_distance(q->theta, boundary_angle(sigma, p->theta)));
      best = std::max(best, circle_distance(q->psi, boundary_angle(tau, p->psi)));
    }
  }
  return best;
}

CircleHomeo perturb_breakpoint(const CircleHomeo& W, std::size_t index, double delta) {
  const auto& src = W.breakpoints();
  if (index >= src.size()) throw std::invalid_argument("perturb_breakpoint: index out of range");
  const double target = src[index].psi + delta;
  std::vector<Breakpoint> bp;
  bp.reserve(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (k == index) {
      bp.push_back({src[k].theta, target});
    } else if (k < index && src[k].psi < target) {
      bp.push_back(src[k]);
    } else if (k > index && src[k].psi > target) {
      bp.push_back(src[k]);
    }
  }
  return CircleHomeo(std::move(bp));
}

}  // namespace weldlab
