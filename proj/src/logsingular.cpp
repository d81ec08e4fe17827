#include "weldlab/logsingular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace weldlab {

namespace {

struct Piece {
  double start;
  double length;
  double image_start;
  double image_length;
};

void check_arc(const Arc& a, const char* what) {
  if (!std::isfinite(a.start) || !std::isfinite(a.length) || !(a.length > 0.0) ||
      !(a.length < kTwoPi)) {
    throw std::invalid_argument(std::string("build_log_singular: degenerate ") + what);
  }
}

// Breakpoints of the PL map that is linear on each piece and linear on the gap
// between the end of the domain arc and its start + 2π.
CircleHomeo map_from_pieces(const std::vector<Piece>& pieces) {
  std::vector<Breakpoint> bp;
  bp.reserve(pieces.size() + 1);
  for (const Piece& p : pieces) bp.push_back({p.start, p.image_start});
  const Piece& last = pieces.back();
  bp.push_back({last.start + last.length, last.image_start + last.image_length});
  return CircleHomeo(std::move(bp));
}

double closed_form_capacity_sum(const std::vector<double>& lengths) {
  double s = 0.0;
  for (double L : lengths) s += 1.0 / arc_energy_closed_form(L);
  return s;
}

}  // namespace

ArcSet RedBlueStage::red_union() const {
  std::vector<Arc> arcs;
  for (const TaggedArc& t : parts) {
    if (t.tag == Tag::red) arcs.push_back({t.start, t.length});
  }
  return ArcSet(std::move(arcs));
}

ArcSet RedBlueStage::blue_image_union() const {
  std::vector<Arc> arcs;
  for (const TaggedArc& t : parts) {
    if (t.tag == Tag::blue) arcs.push_back({t.image_start, t.image_length});
  }
  return ArcSet(std::move(arcs));
}

std::vector<CircleHomeo> LogSingularMap::maps() const {
  std::vector<CircleHomeo> out;
  out.reserve(stages.size() + 1);
  for (const RedBlueStage& s : stages) out.push_back(s.map);
  out.push_back(h);
  return out;
}

double tail_bound(int m) {
  if (m < 1) throw std::invalid_argument("tail_bound: m must be >= 1");
  return std::ldexp(1.0, 1 - m);
}

CircleHomeo arc_linear_map(const Arc& I, const Arc& J) {
  check_arc(I, "domain arc");
  check_arc(J, "target arc");
  return map_from_pieces({{I.start, I.length, J.start, J.length}});
}

LogSingularMap build_log_singular(const Arc& I, const Arc& J, int depth,
                                  const LogSingularOptions& opt) {
  check_arc(I, "domain arc");
  check_arc(J, "target arc");
  if (depth < 1) throw std::invalid_argument("build_log_singular: depth must be >= 1");
  if (!(opt.max_fraction > 0.0 && opt.max_fraction < 0.5)) {
    throw std::invalid_argument("build_log_singular: max_fraction must lie in (0, 1/2)");
  }

  LogSingularMap out;
  out.domain = I;
  out.target = J;
  out.requested_depth = depth;
  out.exceptional_set_bound = tail_bound(opt.tail_start > 0 ? opt.tail_start : depth);

  std::vector<Piece> current{{I.start, I.length, J.start, J.length}};
  CircleHomeo h = map_from_pieces(current);

  for (int n = 1; n <= depth; ++n) {
    const std::size_t count = current.size() * static_cast<std::size_t>(n);
    const double budget = std::ldexp(1.0, -n);
    const double per_piece = budget / static_cast<double>(count) * (1.0 - 1e-12);
    const double budget_length = arc_length_for_capacity(per_piece);
    if (!(budget_length >= opt.resolution)) {
      out.truncated = true;
      break;
    }

    RedBlueStage stage;
    stage.index = n;
    stage.map = h;
    stage.budget = budget;
    stage.parts.reserve(2 * count);
    std::vector<Piece> next;
    next.reserve(2 * count);
    std::vector<double> red_lengths, blue_lengths;
    red_lengths.reserve(count);
    blue_lengths.reserve(count);
    bool underflow = false;

    for (const Piece& c : current) {
      for (int j = 0; j < n; ++j) {
        const double s0 = (j == 0) ? c.start : c.start + c.length * j / n;
        const double s1 = (j + 1 == n) ? c.start + c.length : c.start + c.length * (j + 1) / n;
        const double t0 = (j == 0) ? c.image_start : h.evaluate_lift(s0);
        const double t1 = (j + 1 == n) ? c.image_start + c.image_length : h.evaluate_lift(s1);
        const double len = s1 - s0;
        const double img = t1 - t0;
        stage.max_image_length = std::max(stage.max_image_length, img);

        const double r = std::min(budget_length, opt.max_fraction * len);
        const double b = std::min(budget_length, opt.max_fraction * img);
        if (r < opt.resolution || b < opt.resolution) underflow = true;
        const double split = s0 + r;
        const double image_split = t1 - b;
        red_lengths.push_back(r);
        blue_lengths.push_back(b);
        stage.parts.push_back({s0, split - s0, t0, image_split - t0, Tag::red});
        stage.parts.push_back({split, s1 - split, image_split, t1 - image_split, Tag::blue});
        next.push_back({s0, split - s0, t0, image_split - t0});
        next.push_back({split, s1 - split, image_split, t1 - image_split});
      }
    }
    if (underflow) {
      out.truncated = true;
      break;
    }
    stage.red_closed_form_sum = closed_form_capacity_sum(red_lengths);
    stage.blue_closed_form_sum = closed_form_capacity_sum(blue_lengths);
    stage.red_capacity_certificate = capacity_estimate(stage.red_union(), opt.certificate_points);
    stage.blue_image_capacity_certificate =
        capacity_estimate(stage.blue_image_union(), opt.certificate_points);

    current = std::move(next);
    h = map_from_pieces(current);
    out.stages.push_back(std::move(stage));
  }
  out.h = h;
  return out;
}

bool CertificateReport::all_pass() const {
  if (realized_depth < requested_depth) return false;
  return std::all_of(stages.begin(), stages.end(),
                     [](const StageCertificate& s) { return s.red_pass && s.blue_pass; });
}

CertificateReport certificate_check(const LogSingularMap& m, int n_points, double slack,
                                    std::uint64_t seed) {
  CertificateReport rep;
  rep.requested_depth = m.requested_depth;
  rep.realized_depth = m.realized_depth();
  rep.tail_bound = m.exceptional_set_bound;
  rep.stages.resize(m.stages.size());
  const int count = static_cast<int>(m.stages.size());
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < count; ++k) {
    const RedBlueStage& s = m.stages[k];
    const CapacityEstimate red = capacity_estimate(s.red_union(), n_points, seed + k);
    const CapacityEstimate blue = capacity_estimate(s.blue_image_union(), n_points, seed + k);
    const double limit = s.budget * (1.0 + slack);
    rep.stages[k] = {s.index, s.budget, red.upper, blue.upper, red.upper <= limit,
                     blue.upper <= limit};
  }
  return rep;
}

double sup_distance_exact(const CircleHomeo& h1, const CircleHomeo& h2) {
  double best = 0.0;
  for (const CircleHomeo* h : {&h1, &h2}) {
    for (const Breakpoint& b : h->breakpoints()) {
      best = std::max(best, circle_distance(h1.evaluate_lift(b.theta), h2.evaluate_lift(b.theta)));
    }
  }
  return best;
}

std::vector<double> convergence_profile(const LogSingularMap& m) {
  const std::vector<CircleHomeo> hs = m.maps();
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < hs.size(); ++k) {
    out.push_back(sup_distance_exact(hs[k], hs[k + 1]));
  }
  return out;
}

LogSingularMap with_scaled_red(const LogSingularMap& m, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("with_scaled_red: factor must be positive");
  LogSingularMap out = m;
  for (RedBlueStage& s : out.stages) {
    for (std::size_t k = 0; k + 1 < s.parts.size(); k += 2) {
      TaggedArc& red = s.parts[k];
      TaggedArc& blue = s.parts[k + 1];
      const double piece_end = blue.end();
      red.length *= factor;
      if (!(red.end() < piece_end)) {
        throw std::invalid_argument("with_scaled_red: red part would cover its piece");
      }
      blue.start = red.end();
      blue.length = piece_end - blue.start;
    }
  }
  return out;
}

}  // namespace weldlab
