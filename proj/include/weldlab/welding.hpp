#pragma once

#include <array>
#include <vector>

#include "weldlab/circle_homeo.hpp"
#include "weldlab/moebius.hpp"
#include "weldlab/polygon.hpp"

namespace weldlab {

enum class Side { interior, exterior };

/// Boundary values of a Riemann map: sample k sits at angle theta[k] and at
/// positions[k] on the polygon.
struct BoundaryCorrespondence {
  Side side = Side::interior;
  PolygonCurve polygon = PolygonCurve::regular(3);
  std::vector<BoundaryPosition> positions;
  std::vector<double> arclength;
  std::vector<double> theta;                 ///< strictly increasing, theta[0] = 0
  std::array<std::size_t, 3> anchors{};      ///< sample indices of the anchor vertices
  std::array<double, 3> anchor_angles{};
  Complex chart_center = 0.0;                ///< inversion centre (exterior side)

  std::size_t size() const { return theta.size(); }
  /// PL interpolation, periodic in both variables.
  double angle_at_arclength(double s) const;
  double arclength_at_angle(double theta) const;
};

/// Boundary correspondence of the Riemann map from the disk onto the interior.
BoundaryCorrespondence interior_map(const PolygonCurve& P, int resolution);
/// Boundary correspondence of the map from the outside of the disk onto the exterior,
/// computed by inversion about an interior point.
BoundaryCorrespondence exterior_map(const PolygonCurve& P, int resolution);
/// The same map read off the exterior side of one interior unzipping.
BoundaryCorrespondence exterior_map_direct(const PolygonCurve& P, int resolution);

struct WeldingResult {
  CircleHomeo h = CircleHomeo::identity();
  BoundaryCorrespondence f;
  BoundaryCorrespondence g;
  bool gap = false;  ///< some interior sample had no exterior partner nearby
};

WeldingResult weld(const PolygonCurve& P, int resolution);
/// θ_f -> θ_g at matched boundary positions.
CircleHomeo welding_of_curve(const PolygonCurve& P, int resolution);

struct PiecewiseConformalMap {
  BoundaryCorrespondence interior;
  BoundaryCorrespondence exterior;
  MoebiusMap sigma;
  MoebiusMap tau;
  std::vector<Complex> mesh;              ///< boundary points z_k
  std::vector<Complex> interior_images;   ///< (f ∘ σ ∘ f⁻¹)(z_k)
  std::vector<Complex> exterior_images;   ///< (g ∘ τ ∘ g⁻¹)(z_k)
  double mismatch = 0.0;                  ///< max_k |interior_images - exterior_images|

  Complex interior_rule(double s) const;
  Complex exterior_rule(double s) const;
};

/// Throws std::invalid_argument on side or polygon mismatch, or when σ or τ does not
/// preserve the unit circle.
PiecewiseConformalMap assemble_piecewise_map(const BoundaryCorrespondence& fc,
                                             const BoundaryCorrespondence& gc,
                                             const MoebiusMap& sigma, const MoebiusMap& tau);

}  // namespace weldlab
