#pragma once

#include <span>
#include <vector>

#include "weldlab/moebius.hpp"

namespace weldlab {

/// Boundary images of the data points on the real line after unzipping, for both sides
/// of the curve. The interior of the positively oriented curve goes to the upper
/// half-plane; the exterior goes to the upper half-plane after z -> 1/z on its side,
/// so both sequences increase along the curve. Point 0 goes to -∞ on both sides.
struct UnzipResult {
  std::vector<double> interior;
  std::vector<double> exterior;
};

/// Geodesic-arc unzipping of the closed curve through `points` (in order). Throws
/// std::invalid_argument for fewer than 3 points, consecutive points closer than
/// 1e-12, or a collapsed slit during the chain.
UnzipResult unzip(std::span<const Complex> points);
UnzipResult unzip_serial(std::span<const Complex> points);

}  // namespace weldlab
