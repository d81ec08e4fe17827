#include "weldlab/welding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "weldlab/zipper.hpp"

namespace weldlab {

namespace {

struct Anchors {
  std::array<std::size_t, 3> vertex{};
  std::array<double, 3> angle{};
};

Anchors choose_anchors(const PolygonCurve& P) {
  const double L = P.perimeter();
  Anchors a;
  a.vertex[0] = 0;
  for (int j = 1; j <= 2; ++j) {
    const double want = L * j / 3.0;
    std::size_t best = 1;
    for (std::size_t k = 1; k < P.size(); ++k) {
      if (std::abs(P.vertex_arclength(k) - want) < std::abs(P.vertex_arclength(best) - want)) {
        best = k;
      }
    }
    a.vertex[j] = best;
  }
  if (a.vertex[2] <= a.vertex[1]) a.vertex[2] = a.vertex[1] + 1;
  if (a.vertex[2] >= P.size()) {
    a.vertex[2] = P.size() - 1;
    a.vertex[1] = P.size() - 2;
  }
  for (int j = 0; j < 3; ++j) a.angle[j] = kTwoPi * P.vertex_arclength(a.vertex[j]) / L;
  return a;
}

ExtComplex real_point(double x) {
  if (std::isinf(x)) return ExtComplex::infinity();
  return ExtComplex(x);
}

ExtComplex line_point_of_angle(double theta) {
  if (theta == 0.0) return ExtComplex::infinity();
  return ExtComplex(std::tan(0.5 * (theta - std::numbers::pi)));
}

BoundaryCorrespondence normalize(const PolygonCurve& P, std::vector<BoundaryPosition> pos,
                                 const std::vector<double>& X, Side side) {
  BoundaryCorrespondence bc;
  bc.side = side;
  bc.polygon = P;
  bc.positions = std::move(pos);
  const std::size_t n = bc.positions.size();
  bc.arclength.resize(n);
  for (std::size_t k = 0; k < n; ++k) bc.arclength[k] = P.arclength(bc.positions[k]);

  const Anchors an = choose_anchors(P);
  std::array<ExtComplex, 3> src, dst;
  for (int j = 0; j < 3; ++j) {
    std::size_t idx = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (bc.positions[k].edge == static_cast<int>(an.vertex[j]) && bc.positions[k].fraction == 0.0) {
        idx = k;
        break;
      }
    }
    if (idx == n) throw std::invalid_argument("normalize: anchor vertex not sampled");
    bc.anchors[j] = idx;
    bc.anchor_angles[j] = an.angle[j];
    src[j] = real_point(X[idx]);
    dst[j] = line_point_of_angle(an.angle[j]);
  }
  const MoebiusMap M = fit_three_points(src, dst);

  bc.theta.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const ExtComplex w = M.apply(real_point(X[k]));
    bc.theta[k] = w.is_infinite() ? 0.0 : std::numbers::pi + 2.0 * std::atan(w.value().real());
  }
  bc.theta[bc.anchors[0]] = bc.anchor_angles[0];
  for (std::size_t k = 1; k < n; ++k) {
    if (!(bc.theta[k] > bc.theta[k - 1])) {
      throw std::invalid_argument("normalize: boundary correspondence lost monotonicity");
    }
  }
  if (!(bc.theta.back() < kTwoPi)) {
    throw std::invalid_argument("normalize: boundary correspondence lost monotonicity");
  }
  return bc;
}

std::vector<Complex> points_of(const PolygonCurve& P, const std::vector<BoundaryPosition>& pos) {
  std::vector<Complex> z(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) z[k] = P.point(pos[k]);
  return z;
}

// Sample index closest to the middle of the longest edge.
std::size_t zipper_start(const PolygonCurve& P, const std::vector<BoundaryPosition>& pos) {
  std::size_t edge = 0;
  for (std::size_t k = 1; k < P.size(); ++k) {
    if (P.edge_length(k) > P.edge_length(edge)) edge = k;
  }
  std::size_t best = 0;
  double gap = 2.0;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (pos[k].edge != static_cast<int>(edge)) continue;
    if (std::abs(pos[k].fraction - 0.5) < gap) {
      gap = std::abs(pos[k].fraction - 0.5);
      best = k;
    }
  }
  return best;
}

// Unzips the cyclic sequence starting at index `start`; results use the original indexing.
UnzipResult unzip_from(const std::vector<Complex>& z, std::size_t start) {
  const std::size_t n = z.size();
  std::vector<Complex> r(n);
  for (std::size_t j = 0; j < n; ++j) r[j] = z[(start + j) % n];
  const UnzipResult u = unzip(r);
  UnzipResult out;
  out.interior.resize(n);
  out.exterior.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.interior[(start + j) % n] = u.interior[j];
    out.exterior[(start + j) % n] = u.exterior[j];
  }
  return out;
}

// Periodic PL interpolation of y over x, both strictly increasing from x[0], y[0]
// with periods px, py.
double periodic_interp(const std::vector<double>& x, const std::vector<double>& y, double px,
                       double py, double t) {
  const double base = x.front();
  const double m = std::floor((t - base) / px);
  double u = t - m * px;
  if (u < base) u = base;
  const auto it = std::upper_bound(x.begin(), x.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
  const double x0 = x[k], y0 = y[k];
  const double x1 = (k + 1 < x.size()) ? x[k + 1] : x.front() + px;
  const double y1 = (k + 1 < y.size()) ? y[k + 1] : y.front() + py;
  const double v = (u == x0) ? y0 : y0 + (u - x0) / (x1 - x0) * (y1 - y0);
  return v + m * py;
}

}  // namespace

double BoundaryCorrespondence::angle_at_arclength(double s) const {
  return periodic_interp(arclength, theta, polygon.perimeter(), kTwoPi, s);
}

double BoundaryCorrespondence::arclength_at_angle(double t) const {
  return periodic_interp(theta, arclength, kTwoPi, polygon.perimeter(), t);
}

BoundaryCorrespondence interior_map(const PolygonCurve& P, int resolution) {
  std::vector<BoundaryPosition> pos = sample_boundary(P, resolution, Grading::interior);
  const UnzipResult u = unzip_from(points_of(P, pos), zipper_start(P, pos));
  return normalize(P, std::move(pos), u.interior, Side::interior);
}

BoundaryCorrespondence exterior_map_direct(const PolygonCurve& P, int resolution) {
  std::vector<BoundaryPosition> pos = sample_boundary(P, resolution, Grading::exterior);
  const UnzipResult u = unzip_from(points_of(P, pos), zipper_start(P, pos));
  return normalize(P, std::move(pos), u.exterior, Side::exterior);
}

BoundaryCorrespondence exterior_map(const PolygonCurve& P, int resolution) {
  std::vector<BoundaryPosition> pos = sample_boundary(P, resolution, Grading::exterior);
  const std::vector<Complex> z = points_of(P, pos);
  const Complex zc = P.interior_point();
  const std::size_t n = z.size();
  std::vector<Complex> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = 1.0 / (z[(n - j) % n] - zc);
  const UnzipResult u = unzip_from(w, (n - zipper_start(P, pos)) % n);
  std::vector<double> X(n);
  for (std::size_t k = 0; k < n; ++k) X[k] = -u.interior[(n - k) % n];
  BoundaryCorrespondence bc = normalize(P, std::move(pos), X, Side::exterior);
  bc.chart_center = zc;
  return bc;
}

WeldingResult weld(const PolygonCurve& P, int resolution) {
  WeldingResult r;
  r.f = interior_map(P, resolution);
  r.g = exterior_map(P, resolution);
  const double L = P.perimeter();
  auto max_spacing = [L](const std::vector<double>& s) {
    double m = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) m = std::max(m, ((k + 1 < s.size()) ? s[k + 1] : L) - s[k]);
    return m;
  };
  const double window = 2.0 * std::max(max_spacing(r.f.arclength), max_spacing(r.g.arclength));

  // merge both sample sets by arclength; each side interpolates the other
  std::vector<Breakpoint> bp;
  bp.reserve(r.f.size() + r.g.size());
  std::size_t i = 0, j = 0;
  while (i < r.f.size() || j < r.g.size()) {
    const double sf = (i < r.f.size()) ? r.f.arclength[i] : L;
    const double sg = (j < r.g.size()) ? r.g.arclength[j] : L;
    Breakpoint b;
    if (sf == sg) {
      b = {r.f.theta[i++], r.g.theta[j++]};
    } else if (sf < sg) {
      const double prev = (j > 0) ? r.g.arclength[j - 1] : 0.0;
      if (std::min(sf - prev, sg - sf) > window) r.gap = true;
      b = {r.f.theta[i++], r.g.angle_at_arclength(sf)};
    } else {
      const double prev = (i > 0) ? r.f.arclength[i - 1] : 0.0;
      if (std::min(sg - prev, sf - sg) > window) r.gap = true;
      b = {r.f.angle_at_arclength(sg), r.g.theta[j++]};
    }
    if (!bp.empty() && !(b.theta > bp.back().theta && b.psi > bp.back().psi)) continue;
    bp.push_back(b);
  }
  r.h = CircleHomeo(std::move(bp));
  return r;
}

CircleHomeo welding_of_curve(const PolygonCurve& P, int resolution) { return weld(P, resolution).h; }

Complex PiecewiseConformalMap::interior_rule(double s) const {
  const double t = boundary_angle(sigma, interior.angle_at_arclength(s));
  return interior.polygon.point_at_arclength(interior.arclength_at_angle(t));
}

Complex PiecewiseConformalMap::exterior_rule(double s) const {
  const double t = boundary_angle(tau, exterior.angle_at_arclength(s));
  return exterior.polygon.point_at_arclength(exterior.arclength_at_angle(t));
}

PiecewiseConformalMap assemble_piecewise_map(const BoundaryCorrespondence& fc,
                                             const BoundaryCorrespondence& gc,
                                             const MoebiusMap& sigma, const MoebiusMap& tau) {
  if (fc.side != Side::interior || gc.side != Side::exterior) {
    throw std::invalid_argument("assemble_piecewise_map: expected interior and exterior sides");
  }
  if (fc.polygon.vertices() != gc.polygon.vertices()) {
    throw std::invalid_argument("assemble_piecewise_map: correspondences use different polygons");
  }
  if (!preserves_unit_circle(sigma, 64, 1e-10) || !preserves_unit_circle(tau, 64, 1e-10)) {
    throw std::invalid_argument("assemble_piecewise_map: sigma and tau must preserve the circle");
  }
  PiecewiseConformalMap F;
  F.interior = fc;
  F.exterior = gc;
  F.sigma = sigma;
  F.tau = tau;
  const std::size_t n = fc.size();
  F.mesh.resize(n);
  F.interior_images.resize(n);
  F.exterior_images.resize(n);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = fc.arclength[k];
    F.mesh[k] = fc.polygon.point(fc.positions[k]);
    F.interior_images[k] = F.interior_rule(s);
    F.exterior_images[k] = F.exterior_rule(s);
    worst = std::max(worst, std::abs(F.interior_images[k] - F.exterior_images[k]));
  }
  F.mismatch = worst;
  return F;
}

}  // namespace weldlab
