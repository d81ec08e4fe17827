#pragma once

// Data-parallel inner loops of the capacity and welding numerics. Every parallel kernel
// has a *_serial twin used as the reference in tests and in the benchmark; the parallel
// versions reduce per-row partials in index order, so results are bit-identical to the
// serial ones for any thread count.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace weldlab::kernels {

/// log(2/|e^{iu} - 1|) = -log|sin(u/2)|, the pair kernel in angle coordinates.
double log_kernel(double u);

/// Closed arc [lo, hi] in lifted angles carrying a uniform density.
struct Cell {
  double lo;
  double hi;
  double center() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Mean of log_kernel(x - y) over x in a, y in b.
double cell_pair_energy(const Cell& a, const Cell& b);
/// Mean of log_kernel(x - y) over y in c.
double point_cell_energy(double x, const Cell& c);

/// Σ_{i≠j} w_i w_j log_kernel(θ_i - θ_j).
double atom_pair_energy(std::span<const double> theta, std::span<const double> weight);
double atom_pair_energy_serial(std::span<const double> theta, std::span<const double> weight);

/// Σ_{i≠j} log_kernel(θ_i - θ_j) / (n(n-1)).
double normalized_pair_energy(std::span<const double> theta);
double normalized_pair_energy_serial(std::span<const double> theta);

/// Symmetric matrix of cell_pair_energy.
Eigen::MatrixXd cell_kernel_matrix(std::span<const Cell> cells);
Eigen::MatrixXd cell_kernel_matrix_serial(std::span<const Cell> cells);

/// Potential Σ_j w_j point_cell_energy(x, c_j) at each x.
std::vector<double> cell_potential(std::span<const Cell> cells, std::span<const double> weight,
                                   std::span<const double> x);
std::vector<double> cell_potential_serial(std::span<const Cell> cells,
                                          std::span<const double> weight,
                                          std::span<const double> x);

/// Gradient and Hessian of normalized_pair_energy with respect to the angles.
void pair_energy_derivatives(std::span<const double> theta, Eigen::VectorXd& grad,
                             Eigen::MatrixXd& hess);

}  // namespace weldlab::kernels
