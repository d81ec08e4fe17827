#pragma once

#include <cstddef>
#include <vector>

#include "weldlab/moebius.hpp"

namespace weldlab {

/// Point on the boundary: edge k runs from vertex k to vertex k+1 (mod n).
struct BoundaryPosition {
  int edge = 0;
  double fraction = 0.0;  ///< in [0, 1)
};

/// Simple, positively oriented polygon, closed implicitly.
class PolygonCurve {
 public:
  /// Throws std::invalid_argument for fewer than 3 vertices, non-finite or repeated
  /// consecutive vertices, self-intersection, or non-positive signed area.
  explicit PolygonCurve(std::vector<Complex> vertices);

  static PolygonCurve regular(int n, double radius = 1.0, Complex center = 0.0,
                              double phase = 0.0);

  const std::vector<Complex>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  Complex vertex(std::size_t k) const { return v_[k % v_.size()]; }

  double perimeter() const { return cum_.back(); }
  double edge_length(std::size_t k) const { return cum_[k + 1] - cum_[k]; }
  /// Arclength from vertex 0 to vertex k.
  double vertex_arclength(std::size_t k) const { return cum_[k]; }
  double signed_area() const;
  /// Signed turning angle at vertex k, in (-π, π); positive at convex corners.
  double turning_angle(std::size_t k) const;
  Complex centroid() const;
  /// A point strictly inside (midpoint of the widest horizontal chord through the centroid height).
  Complex interior_point() const;
  bool contains(Complex z) const;

  Complex point(const BoundaryPosition& p) const;
  double arclength(const BoundaryPosition& p) const;
  BoundaryPosition position_at_arclength(double s) const;
  Complex point_at_arclength(double s) const { return point(position_at_arclength(s)); }

  PolygonCurve translated(Complex c) const;
  /// Vertex images under T; throws when a vertex goes to ∞ or the image is invalid.
  PolygonCurve transformed(const MoebiusMap& T) const;

 private:
  std::vector<Complex> v_;
  std::vector<double> cum_;
};

enum class Grading { uniform, interior, exterior };

/// All vertices plus `resolution - n` further points spread over the edges in
/// proportion to length, in boundary order starting at vertex 0. Interior and exterior
/// grading cluster points toward corners that are re-entrant on that side.
std::vector<BoundaryPosition> sample_boundary(const PolygonCurve& P, int resolution,
                                              Grading grading = Grading::uniform);

}  // namespace weldlab
