#include "weldlab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace weldlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;

double wrap(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

// [0, 1) from the top 53 bits; portable across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double full_circle_capacity() { return 1.0 / kLog2; }

ArcSet::ArcSet(std::vector<Arc> arcs) {
  if (arcs.empty()) throw std::invalid_argument("ArcSet: empty");
  for (auto& a : arcs) {
    if (!(a.length > 0.0) || !std::isfinite(a.start)) {
      throw std::invalid_argument("ArcSet: arcs need positive length");
    }
    if (a.length >= kTwoPi) {
      full_ = true;
      arcs_ = {{0.0, kTwoPi}};
      return;
    }
    a.start = wrap(a.start);
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
  std::vector<Arc> merged;
  for (const auto& a : arcs) {
    if (!merged.empty() && a.start <= merged.back().end()) {
      merged.back().length = std::max(merged.back().end(), a.end()) - merged.back().start;
    } else {
      merged.push_back(a);
    }
  }
  // wrap-around overlap between the last arc and the first
  while (merged.size() > 1 && merged.back().end() >= merged.front().start + kTwoPi) {
    Arc& last = merged.back();
    const double new_end = std::max(last.end(), merged.front().end() + kTwoPi);
    last.length = new_end - last.start;
    merged.erase(merged.begin());
  }
  if (merged.size() == 1 && merged.front().length >= kTwoPi) {
    full_ = true;
    merged = {{0.0, kTwoPi}};
  }
  arcs_ = std::move(merged);
}

ArcSet ArcSet::full_circle() { return ArcSet({{0.0, kTwoPi}}); }

ArcSet ArcSet::from_endpoints(double alpha, double beta) { return ArcSet({{alpha, beta - alpha}}); }

double ArcSet::total_length() const {
  double s = 0.0;
  for (const auto& a : arcs_) s += a.length;
  return s;
}

bool ArcSet::contains(const ArcSet& other, double tol) const {
  if (full_) return true;
  for (const auto& o : other.arcs_) {
    bool inside = false;
    for (const auto& a : arcs_) {
      double s = o.start;
      if (s < a.start - tol) s += kTwoPi;
      if (s >= a.start - tol && s + o.length <= a.end() + tol) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.size() != weights_.size() || support_.empty()) {
    throw std::invalid_argument("DiscreteMeasure: support/weight size mismatch");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("DiscreteMeasure: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("DiscreteMeasure: weights must sum to 1");
  std::vector<double> s(support_.size());
  std::transform(support_.begin(), support_.end(), s.begin(), wrap);
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw std::invalid_argument("DiscreteMeasure: support points must be distinct");
  }
}

double discrete_energy(const DiscreteMeasure& mu) {
  if (mu.size() < 2) return std::numeric_limits<double>::infinity();
  return kernels::atom_pair_energy(mu.support(), mu.weights());
}

double arc_energy_closed_form(double length) {
  if (!(length > 0.0 && length <= kTwoPi)) {
    throw std::invalid_argument("arc_capacity_closed_form: length must lie in (0, 2pi]");
  }
  return std::log(2.0 / std::sin(0.25 * length));
}

double arc_capacity_closed_form(double length) { return 1.0 / arc_energy_closed_form(length); }

double arc_length_for_capacity(double capacity) {
  if (!(capacity > 0.0)) return 0.0;
  if (capacity >= 1.0 / kLog2) return kTwoPi;
  const double s = 2.0 * std::exp(-1.0 / capacity);
  if (s >= 1.0) return kTwoPi;
  return 4.0 * std::asin(s);
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    css += u[static_cast<std::size_t>(k)];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  Eigen::VectorXd w = (v.array() - theta).max(0.0).matrix();
  w /= w.sum();
  return w;
}

SimplexQpResult minimize_on_simplex(const Eigen::MatrixXd& K, const SimplexQpOptions& opt) {
  const Eigen::Index n = K.rows();
  SimplexQpResult res;
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (opt.warm_start) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd x = ldlt.solve(Eigen::VectorXd::Ones(n));
      if (x.allFinite() && x.sum() > 0.0) w = project_to_simplex(x / x.sum());
    }
  }
  auto value = [&](const Eigen::VectorXd& v) { return v.dot(K * v); };
  double f = value(w);
  double step = 1.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    const Eigen::VectorXd g = 2.0 * (K * w);
    const double pg = (w - project_to_simplex(w - g)).norm();
    res.iterations = it;
    if (pg < opt.tol) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd cand = project_to_simplex(w - step * g);
      const double fc = value(cand);
      if (fc <= f + 1e-4 * g.dot(cand - w)) {
        const Eigen::VectorXd s = cand - w;
        const Eigen::VectorXd y = 2.0 * (K * s);
        w = cand;
        f = fc;
        accepted = true;
        const double sy = s.dot(y);
        step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-10, 1e10) : step * 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = pg < std::sqrt(opt.tol);
      break;
    }
  }
  res.weights = w;
  res.value = f;
  return res;
}

std::vector<kernels::Cell> arc_cells(const ArcSet& E, int n) {
  std::vector<kernels::Cell> cells;
  if (E.is_full_circle()) {
    const int m = std::max(n, 2);
    const double h = kTwoPi / m;
    for (int k = 0; k < m; ++k) cells.push_back({(k - 0.5) * h, (k + 0.5) * h});
    return cells;
  }
  const double total = E.total_length();
  for (const auto& a : E.arcs()) {
    const int m = std::max(2, static_cast<int>(std::lround(n * a.length / total)));
    // Nodes follow the arc's equilibrium profile: Chebyshev in sin((θ - c)/2).
    const double c = a.start + 0.5 * a.length;
    const double sg = std::sin(0.25 * a.length);
    std::vector<double> node(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const double x = -std::cos(std::numbers::pi * k / (m - 1));
      node[static_cast<std::size_t>(k)] = c + 2.0 * std::asin(std::clamp(sg * x, -1.0, 1.0));
    }
    node.front() = a.start;
    node.back() = a.end();
    for (int k = 0; k < m; ++k) {
      const auto u = static_cast<std::size_t>(k);
      const double lo = (k == 0) ? a.start : 0.5 * (node[u - 1] + node[u]);
      const double hi = (k == m - 1) ? a.end() : 0.5 * (node[u] + node[u + 1]);
      cells.push_back({lo, hi});
    }
  }
  return cells;
}

EquilibriumResult equilibrium_measure(const ArcSet& E, int n, double tol, int max_iter) {
  if (n < 2) throw std::invalid_argument("equilibrium_measure: n >= 2 required");
  std::vector<kernels::Cell> cells = arc_cells(E, n);
  const Eigen::MatrixXd K = kernels::cell_kernel_matrix(cells);
  const SimplexQpResult qp = minimize_on_simplex(K, {tol, max_iter, true});
  std::vector<double> support(cells.size()), weights(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    support[k] = cells[k].center();
    weights[k] = qp.weights(static_cast<Eigen::Index>(k));
  }
  return {DiscreteMeasure(std::move(support), std::move(weights)), std::move(cells), qp.value,
          qp.iterations, qp.converged};
}

SimplexQpResult equilibrium_on_atoms(const std::vector<double>& theta, double tol, int max_iter) {
  const auto n = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) K(i, j) = kernels::log_kernel(theta[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(j)]);
    }
  }
  // The atom kernel is indefinite; start from the uniform measure.
  return minimize_on_simplex(K, {tol, max_iter, false});
}

namespace {

struct Bounds {
  double lo;
  double hi;
};

// Projected Newton on the angles; the pair energy is convex in ordered angles.
double refine_points(std::vector<double>& theta, const std::vector<Bounds>& bounds,
                     const std::vector<std::size_t>& arc_end, bool periodic) {
  const auto n = static_cast<Eigen::Index>(theta.size());
  auto feasible = [&](const std::vector<double>& t) {
    std::size_t begin = 0;
    for (std::size_t stop : arc_end) {
      for (std::size_t k = begin + 1; k < stop; ++k) {
        if (!(t[k] > t[k - 1])) return false;
      }
      begin = stop;
    }
    if (periodic && !(t.back() - t.front() < kTwoPi)) return false;
    return true;
  };
  double e = kernels::normalized_pair_energy(theta);
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  for (int it = 0; it < 100; ++it) {
    kernels::pair_energy_derivatives(theta, grad, hess);
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& b = bounds[static_cast<std::size_t>(i)];
      const double t = theta[static_cast<std::size_t>(i)];
      if (periodic) {
        if (i == 0) continue;
      } else if ((t <= b.lo && grad(i) > 0.0) || (t >= b.hi && grad(i) < 0.0)) {
        continue;
      }
      free.push_back(i);
    }
    if (free.empty()) break;
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd H(m, m);
    Eigen::VectorXd g(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      g(a) = grad(free[a]);
      for (Eigen::Index b = 0; b < m; ++b) H(a, b) = hess(free[a], free[b]);
    }
    H.diagonal().array() += 1e-14 * H.diagonal().mean();
    const Eigen::VectorXd d = H.ldlt().solve(-g);
    if (!d.allFinite()) break;
    double s = 1.0;
    bool moved = false;
    std::vector<double> cand(theta);
    for (int ls = 0; ls < 50; ++ls) {
      cand = theta;
      for (Eigen::Index a = 0; a < m; ++a) {
        const auto k = static_cast<std::size_t>(free[a]);
        double v = theta[k] + s * d(a);
        if (!periodic) v = std::clamp(v, bounds[k].lo, bounds[k].hi);
        cand[k] = v;
      }
      if (feasible(cand)) {
        const double ec = kernels::normalized_pair_energy(cand);
        if (ec <= e) {
          moved = ec < e;
          theta = cand;
          e = ec;
          break;
        }
      }
      s *= 0.5;
    }
    if (!moved || d.lpNorm<Eigen::Infinity>() * s < 1e-13) break;
  }
  return e;
}

}  // namespace

PointConfiguration minimal_energy_points(const ArcSet& E, int n, int restarts, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("minimal_energy_points: n >= 2 required");
  std::mt19937_64 rng(seed);
  if (E.is_full_circle()) {
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) theta[static_cast<std::size_t>(k)] = kTwoPi * k / n;
    std::vector<Bounds> bounds(theta.size(), {-1e300, 1e300});
    const double e = refine_points(theta, bounds, {theta.size()}, true);
    return {theta, e};
  }
  // Split n among arcs by equilibrium mass.
  const auto& arcs = E.arcs();
  std::vector<int> counts(arcs.size(), 0);
  if (arcs.size() == 1) {
    counts[0] = n;
  } else {
    const EquilibriumResult eq = equilibrium_measure(E, std::max(64, n), 1e-8, 2000);
    std::vector<double> mass(arcs.size(), 0.0);
    for (std::size_t k = 0; k < eq.cells.size(); ++k) {
      const double c = wrap(eq.cells[k].center());
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        double s = c;
        if (s < arcs[a].start - 1e-12) s += kTwoPi;
        if (s <= arcs[a].end() + 1e-12) {
          mass[a] += eq.measure.weights()[k];
          break;
        }
      }
    }
    int used = 0;
    std::vector<std::pair<double, std::size_t>> rem;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const double want = mass[a] * n;
      counts[a] = static_cast<int>(std::floor(want));
      used += counts[a];
      rem.push_back({want - counts[a], a});
    }
    std::sort(rem.begin(), rem.end(), std::greater<>());
    for (std::size_t r = 0; used < n; ++r, ++used) counts[rem[r % rem.size()].second] += 1;
  }
  std::vector<Bounds> bounds;
  std::vector<std::size_t> arc_end;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    for (int k = 0; k < counts[a]; ++k) bounds.push_back({arcs[a].start, arcs[a].end()});
    arc_end.push_back(bounds.size());
  }
  auto start_config = [&](int kind) {
    std::vector<double> theta;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const int m = counts[a];
      const double c = arcs[a].start + 0.5 * arcs[a].length;
      const double sg = std::sin(0.25 * arcs[a].length);
      std::vector<double> local;
      for (int k = 0; k < m; ++k) {
        double t;
        if (m == 1) {
          t = c;
        } else if (kind == 1) {
          t = arcs[a].start + arcs[a].length * k / (m - 1);
        } else {
          const double x = -std::cos(std::numbers::pi * k / (m - 1));
          t = c + 2.0 * std::asin(std::clamp(sg * x, -1.0, 1.0));
        }
        local.push_back(std::clamp(t, arcs[a].start, arcs[a].end()));
      }
      if (kind >= 2 && m > 2) {
        for (int k = 1; k + 1 < m; ++k) {
          const double gap = std::min(local[k] - local[k - 1], local[k + 1] - local[k]);
          local[static_cast<std::size_t>(k)] += 0.3 * gap * (2.0 * unit_uniform(rng) - 1.0);
        }
      }
      theta.insert(theta.end(), local.begin(), local.end());
    }
    return theta;
  };
  PointConfiguration best;
  best.energy = std::numeric_limits<double>::infinity();
  for (int kind = 0; kind < 2 + std::max(0, restarts); ++kind) {
    std::vector<double> theta = start_config(kind);
    const double e = refine_points(theta, bounds, arc_end, false);
    if (e < best.energy) best = {theta, e};
  }
  return best;
}

CapacityEstimate capacity_estimate(const ArcSet& E, int n, std::uint64_t seed) {
  const double cap_max = 1.0 / kLog2;
  CapacityEstimate out;
  const EquilibriumResult eq = equilibrium_measure(E, n);
  out.energy_at_optimum = eq.energy;
  out.iterations = eq.iterations;
  out.converged = eq.converged;
  out.lower = std::clamp(1.0 / eq.energy, 0.0, cap_max);

  const PointConfiguration fek = minimal_energy_points(E, n, 2, seed);
  out.fekete_energy = fek.energy;
  out.fekete_upper = fek.energy > 0.0 ? std::min(1.0 / fek.energy, cap_max) : cap_max;

  std::vector<double> probes;
  for (const auto& c : eq.cells) {
    for (int k = 0; k <= 4; ++k) probes.push_back(c.lo + 0.25 * k * c.width());
  }
  const std::vector<double> pot = kernels::cell_potential(eq.cells, eq.measure.weights(), probes);
  const double umin = *std::min_element(pot.begin(), pot.end());
  out.potential_upper = umin > 0.0 ? std::min(1.0 / umin, cap_max) : cap_max;

  out.upper = std::max(std::min(out.fekete_upper, out.potential_upper), out.lower);
  return out;
}

}  // namespace weldlab
