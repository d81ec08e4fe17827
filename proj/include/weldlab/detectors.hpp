#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "weldlab/circle_homeo.hpp"
#include "weldlab/moebius.hpp"

namespace weldlab {

struct MoebiusFit {
  MoebiusMap map;
  double residual = 0.0;  ///< max_k |map(z_k) - w_k|
};

struct MoebiusFitOptions {
  int starts = 20;
  int max_iter = 2000;
  std::uint64_t seed = 0;
};

/// Best Möbius map for samples (z_k, w_k). Throws std::invalid_argument for fewer than
/// 4 samples, non-finite data, or fewer than 3 distinct sources or targets.
MoebiusFit mobius_fit_residual(const std::vector<std::pair<Complex, Complex>>& samples,
                               const MoebiusFitOptions& opt = {});

/// `count` points on |z| = r_in paired with z + a and `count` on |z| = r_out paired with z + b.
std::vector<std::pair<Complex, Complex>> piecewise_translation_samples(double a, double b,
                                                                       int count = 50,
                                                                       double r_in = 0.3,
                                                                       double r_out = 3.0);

struct EquivalenceResult {
  bool equivalent = false;
  DiskAutomorphism A;
  DiskAutomorphism B;
  double residual = 0.0;  ///< sup over the grid of dist(B(h1(A(θ))), h2(θ))
  int evaluations = 0;
};

struct EquivalenceOptions {
  int restarts = 20;
  int max_iter = 2000;
  int grid = 512;
  std::uint64_t seed = 0;
};

/// sup over the grid of circle_distance(B(h1(A(θ))), h2(θ)).
double equivalence_residual(const CircleHomeo& h1, const CircleHomeo& h2,
                            const DiskAutomorphism& A, const DiskAutomorphism& B,
                            const SampleGrid& grid);

/// Searches Aut(𝔻) × Aut(𝔻) for h2 ≈ B ∘ h1 ∘ A. `equivalent` is false when no witness
/// within tol was found at this budget.
EquivalenceResult welding_equivalence(const CircleHomeo& h1, const CircleHomeo& h2, double tol,
                                      const EquivalenceOptions& opt = {});

/// DiskAutomorphism with the same action as M. Throws std::invalid_argument unless M
/// maps the disk onto itself.
DiskAutomorphism to_disk_automorphism(const MoebiusMap& M);

/// B ∘ h ∘ A as a PL map, sampled at the preimages of h's breakpoints and of a uniform
/// grid with `extra` points.
CircleHomeo conjugate_homeo(const CircleHomeo& h, const DiskAutomorphism& A,
                            const DiskAutomorphism& B, int extra = 4096);

}  // namespace weldlab
