#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "weldlab/capacity.hpp"
#include "weldlab/circle_homeo.hpp"

namespace weldlab {

enum class Tag { red, blue };

/// A tagged piece of the domain arc mapped linearly onto [image_start, image_start + image_length].
struct TaggedArc {
  double start;
  double length;
  double image_start;
  double image_length;
  Tag tag;
  double end() const { return start + length; }
  double image_end() const { return image_start + image_length; }
};

struct RedBlueStage {
  int index = 1;
  std::vector<TaggedArc> parts;           ///< tiles the domain arc, left to right
  CircleHomeo map = CircleHomeo::identity();  ///< h_n
  CapacityEstimate red_capacity_certificate;
  CapacityEstimate blue_image_capacity_certificate;
  double budget = 0.0;                    ///< 2^{-n}
  double red_closed_form_sum = 0.0;       ///< Σ arc_capacity_closed_form over red parts
  double blue_closed_form_sum = 0.0;      ///< same over blue images
  double max_image_length = 0.0;          ///< longest stage-n piece image

  ArcSet red_union() const;
  ArcSet blue_image_union() const;
};

struct LogSingularOptions {
  int certificate_points = 128;
  /// Red (and blue image) parts never exceed this fraction of their piece.
  double max_fraction = 0.25;
  double resolution = 1e-14;
  /// m in the tail bound Σ_{n≥m} 2^{-n}; 0 selects the requested depth.
  int tail_start = 0;
};

struct LogSingularMap {
  Arc domain{0.0, 1.0};
  Arc target{0.0, 1.0};
  std::vector<RedBlueStage> stages;
  CircleHomeo h = CircleHomeo::identity();  ///< h_{k+1} after the last built stage k
  double exceptional_set_bound = 1.0;
  int requested_depth = 0;
  bool truncated = false;                   ///< stopped before requested_depth

  int realized_depth() const { return static_cast<int>(stages.size()); }
  /// h_1, ..., h_{k+1}.
  std::vector<CircleHomeo> maps() const;
};

/// Throws std::invalid_argument unless 0 < |I|, |J| < 2π and depth ≥ 1.
LogSingularMap build_log_singular(const Arc& I, const Arc& J, int depth,
                                  const LogSingularOptions& opt = {});

/// The PL map that is linear from I onto J and linear on the complementary gap.
CircleHomeo arc_linear_map(const Arc& I, const Arc& J);

struct StageCertificate {
  int index;
  double budget;
  double red_upper;
  double blue_upper;
  bool red_pass;
  bool blue_pass;
};

struct CertificateReport {
  std::vector<StageCertificate> stages;
  double tail_bound = 0.0;
  int requested_depth = 0;
  int realized_depth = 0;
  bool all_pass() const;
};

/// Bracket upper bounds are compared against budget·(1 + slack).
CertificateReport certificate_check(const LogSingularMap& m, int n_points, double slack = 0.05,
                                    std::uint64_t seed = 0);

/// Σ_{n≥m} 2^{-n}.
double tail_bound(int m);

/// Exact sup over the circle of circle_distance(h1, h2) for PL maps (attained at breakpoints).
double sup_distance_exact(const CircleHomeo& h1, const CircleHomeo& h2);

/// sup_distance(h_n, h_{n+1}) per built stage.
std::vector<double> convergence_profile(const LogSingularMap& m);

/// Copy of m whose stage partitions have every red length multiplied by factor
/// (blue parts shrink to keep the tiling).
LogSingularMap with_scaled_red(const LogSingularMap& m, double factor);

}  // namespace weldlab
