#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "weldlab/capacity.hpp"
#include "weldlab/circle_homeo.hpp"
#include "weldlab/logsingular.hpp"
#include "weldlab/moebius.hpp"

namespace weldlab {

enum class SeedKind { log_singular, linear };

struct EquivariantSpec {
  double a = 1.0;
  double b = 2.0;
  int seed_depth = 4;
  int orbits = 20;        ///< N: orbits n = -N..N
  double guard = 1e-4;    ///< δ
  SeedKind seed = SeedKind::log_singular;
  /// Seed pieces are subdivided until domain and image gaps are at most this.
  double refine_spacing = 1e-3;

  /// Throws std::invalid_argument when invalid.
  void validate() const;
};

/// arg φ(x) for φ(z) = (z - i)/(z + i), as an angle in [0, 2π]; ±∞ give 0 and 2π.
double cayley_angle(double x);
/// Inverse of cayley_angle on (0, 2π).
double cayley_coordinate(double theta);
/// Boundary action of parabolic_disk(a)^n in angle coordinates.
double parabolic_angle_power(double theta, double a, int n);

struct OrbitDecomposition {
  int orbits = 0;
  std::vector<Arc> I;   ///< I_n for n = -N..N, index n + N
  std::vector<Arc> J;
  double total_length_I() const;
  double total_length_J() const;
  bool disjoint(double tol = 1e-12) const;
};

OrbitDecomposition orbit_arcs(const EquivariantSpec& spec);
/// Orbit arcs of x -> x + a only (N ≥ 0 allowed).
std::vector<Arc> orbit_arcs(double a, int N);

struct OrbitBreakpoint {
  int orbit;          ///< n
  std::size_t index;  ///< seed breakpoint index
  double theta;
  double psi;
};

struct EquivariantResult {
  EquivariantSpec spec;
  CircleHomeo W = CircleHomeo::identity();
  OrbitDecomposition orbits;
  std::optional<LogSingularMap> seed_map;
  std::vector<Breakpoint> seed_breakpoints;    ///< refined seed on [start of I₀, end of I₀)
  std::vector<OrbitBreakpoint> transported;   ///< orbit-major, ascending θ
  bool truncated = false;                      ///< some transported points fell in the guard band
  double window_lo = 0.0;                      ///< represented range of W
  double window_hi = kTwoPi;

  MoebiusMap sigma() const { return parabolic_disk(spec.a); }
  MoebiusMap tau() const { return parabolic_disk(spec.b); }
};

EquivariantResult build_equivariant(const EquivariantSpec& spec);
CircleHomeo build_equivariant_homeo(const EquivariantSpec& spec);

/// Angles θ contribute only when θ and arg σ(e^{iθ}) both lie in [lo, hi].
struct ResidualWindow {
  double lo = 1e-4;
  double hi = kTwoPi - 1e-4;
};

double functional_equation_residual(const CircleHomeo& W, const MoebiusMap& sigma,
                                    const MoebiusMap& tau, const SampleGrid& grid,
                                    const ResidualWindow& window = {});
double functional_equation_residual_serial(const CircleHomeo& W, const MoebiusMap& sigma,
                                           const MoebiusMap& tau, const SampleGrid& grid,
                                           const ResidualWindow& window = {});

/// Per-angle residual on the grid (0 outside the window).
std::vector<double> residual_profile(const CircleHomeo& W, const MoebiusMap& sigma,
                                     const MoebiusMap& tau, const SampleGrid& grid,
                                     const ResidualWindow& window = {});

/// Residual over the represented range of a built W.
double functional_equation_residual(const EquivariantResult& r, const SampleGrid& grid);

/// max over transported breakpoints with |n| < N of the distance between the stored
/// orbit-(n+1) breakpoint and the Möbius images of the orbit-n one.
double breakpoint_residual(const EquivariantResult& r);

/// Moves ψ of breakpoint `index` by delta and removes breakpoints that would break
/// monotonicity.
CircleHomeo perturb_breakpoint(const CircleHomeo& W, std::size_t index, double delta);

}  // namespace weldlab
