#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "weldlab/moebius.hpp"

namespace weldlab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2π).
double wrap_angle(double theta);
/// Geodesic distance between two angles on the circle, in [0, π].
double circle_distance(double a, double b);

/// arg A(e^{iθ}) in [0, 2π). Throws std::invalid_argument when A sends e^{iθ} to ∞.
double boundary_angle(const MoebiusMap& A, double theta);

struct SampleGrid {
  int count = 1;
  double offset = 0.0;

  SampleGrid() = default;
  explicit SampleGrid(int n, double off = 0.0);
  double angle(int k) const { return offset + kTwoPi * k / count; }
};

struct Breakpoint {
  double theta;
  double psi;
};

/// Degree-1 orientation-preserving piecewise-linear circle map in lifted angles.
///
/// Breakpoints (θ_k, ψ_k) cover one period: θ_0 ∈ [0, 2π), θ strictly increasing with
/// θ_{N-1} - θ_0 < 2π, ψ strictly increasing with ψ_{N-1} - ψ_0 < 2π. The map is
/// extended by (θ + 2π, ψ + 2π) periodicity and linear interpolation in between.
class CircleHomeo {
 public:
  /// Validates and normalizes; a trailing breakpoint equal to the first shifted by
  /// (2π, 2π) is dropped. Throws std::invalid_argument on invalid input.
  explicit CircleHomeo(std::vector<Breakpoint> breakpoints);

  static CircleHomeo identity();
  static CircleHomeo rotation(double alpha);

  const std::vector<Breakpoint>& breakpoints() const { return bp_; }
  std::size_t size() const { return bp_.size(); }

  /// Lifted value; evaluate_lift(θ + 2π) = evaluate_lift(θ) + 2π.
  double evaluate_lift(double theta) const;
  /// Value reduced to [0, 2π).
  double evaluate(double theta) const { return wrap_angle(evaluate_lift(theta)); }

  /// Largest gap between consecutive image breakpoints (including the wrap gap).
  double mesh() const;

 private:
  std::vector<Breakpoint> bp_;
};

CircleHomeo invert(const CircleHomeo& h);
/// h1 ∘ h2, refined to the union grid so it is exact at every breakpoint.
CircleHomeo compose_homeo(const CircleHomeo& h1, const CircleHomeo& h2);

/// PL map through (θ_k, arg A(e^{iθ_k})). Throws std::invalid_argument when A does not
/// preserve the unit circle on the grid (tol 1e-10) or reverses orientation.
CircleHomeo from_boundary_action(const MoebiusMap& A, const SampleGrid& grid);

double sup_distance(const CircleHomeo& h1, const CircleHomeo& h2, const SampleGrid& grid);
double sup_distance_serial(const CircleHomeo& h1, const CircleHomeo& h2, const SampleGrid& grid);

/// max over adjacent grid-aligned arcs I, J of length `scale` of the image length ratio.
/// Requires 0 < scale < π.
double quasisymmetry_modulus(const CircleHomeo& h, double scale);

/// Grid angles where the displacement h(θ) - θ, reduced to (-π, π], vanishes within
/// tol or changes sign before the next grid angle.
std::vector<double> approximate_fixed_angles(const CircleHomeo& h, const SampleGrid& grid,
                                             double tol);

}  // namespace weldlab
