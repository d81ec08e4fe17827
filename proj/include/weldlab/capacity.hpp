#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "weldlab/kernels.hpp"

namespace weldlab {

/// A closed arc of the circle starting at `start` (radians, [0, 2π)) of positive length.
struct Arc {
  double start;
  double length;
  double end() const { return start + length; }
};

/// Finite union of closed arcs, normalized to sorted, pairwise-disjoint arcs
/// (overlapping or touching input arcs are merged).
class ArcSet {
 public:
  ArcSet() = default;
  /// Throws std::invalid_argument on empty input or non-positive lengths.
  explicit ArcSet(std::vector<Arc> arcs);

  static ArcSet full_circle();
  /// Arc from angle alpha counter-clockwise to beta (beta > alpha in the lift).
  static ArcSet from_endpoints(double alpha, double beta);

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool is_full_circle() const { return full_; }
  double total_length() const;
  bool contains(const ArcSet& other, double tol = 1e-12) const;

 private:
  std::vector<Arc> arcs_;
  bool full_ = false;
};

/// Probability measure supported on finitely many angles.
class DiscreteMeasure {
 public:
  /// Throws std::invalid_argument unless weights are nonnegative, sum to 1 within
  /// 1e-12, support points are distinct, and sizes match.
  DiscreteMeasure(std::vector<double> support, std::vector<double> weights);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::vector<double> support_;
  std::vector<double> weights_;
};

/// Atom energy Σ_{i≠j} w_i w_j log(2/|z_i - z_j|); +∞ for a single atom.
double discrete_energy(const DiscreteMeasure& mu);

/// 1/log(2/sin(length/4)); requires 0 < length ≤ 2π.
double arc_capacity_closed_form(double length);
/// Inverse of arc_capacity_closed_form; 0 when the answer underflows.
double arc_length_for_capacity(double capacity);
/// log(2/sin(length/4)) = 1/arc_capacity_closed_form(length), accurate for tiny arcs.
double arc_energy_closed_form(double length);

struct SimplexQpOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  bool warm_start = true;
};

struct SimplexQpResult {
  Eigen::VectorXd weights;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// min wᵀKw over the probability simplex by projected gradient with Armijo backtracking.
SimplexQpResult minimize_on_simplex(const Eigen::MatrixXd& K, const SimplexQpOptions& opt = {});

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

struct EquilibriumResult {
  DiscreteMeasure measure;            ///< cell centres with optimized weights
  std::vector<kernels::Cell> cells;   ///< each weight is spread uniformly over its cell
  double energy = 0.0;                ///< energy of the smeared (feasible) measure
  int iterations = 0;
  bool converged = false;
};

/// Discretization of E: Chebyshev-graded points per arc (endpoints included), count
/// proportional to arc length, at least 2 per arc; cells are the clipped Voronoi cells.
/// The full circle gets m equal cells.
std::vector<kernels::Cell> arc_cells(const ArcSet& E, int n);

EquilibriumResult equilibrium_measure(const ArcSet& E, int n, double tol = 1e-8,
                                      int max_iter = 20000);

/// Equilibrium weights on fixed atoms with the atom kernel (diagonal excluded).
SimplexQpResult equilibrium_on_atoms(const std::vector<double>& theta, double tol = 1e-8,
                                     int max_iter = 20000);

struct PointConfiguration {
  std::vector<double> points;
  double energy = 0.0;  ///< Σ_{i≠j} log(2/|z_i - z_j|) / (n(n-1))
};

/// Minimal-energy n-point configuration in E. `restarts` counts extra seeded jittered
/// starts beyond the equilibrium-shaped and equispaced ones.
PointConfiguration minimal_energy_points(const ArcSet& E, int n, int restarts = 2,
                                         std::uint64_t seed = 0);

struct CapacityEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double energy_at_optimum = 0.0;
  int iterations = 0;
  bool converged = false;
  double fekete_energy = 0.0;     ///< minimal normalized n-point energy
  double fekete_upper = 0.0;      ///< 1/fekete_energy, clipped
  double potential_upper = 0.0;   ///< 1/min_E U^μ*, clipped
  double half_width() const { return 0.5 * (upper - lower); }
};

/// Two-sided bracket for cap(E) = 1/inf I(μ).
CapacityEstimate capacity_estimate(const ArcSet& E, int n, std::uint64_t seed = 0);

/// 1/log 2, the capacity of the whole circle with this kernel.
double full_circle_capacity();

}  // namespace weldlab
