#include "weldlab/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gsl/gsl_multimin.h>

namespace weldlab {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

using Objective = std::function<double(const double*)>;

struct MinResult {
  std::vector<double> x;
  double value;
  int evaluations;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* f = static_cast<std::pair<const Objective*, int*>*>(params);
  ++*f->second;
  const double r = (*f->first)(v->data);
  return std::isfinite(r) ? r : 1e30;
}

MinResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                      const std::vector<double>& step, int max_iter, double size_tol,
                      double stop_below = -1.0) {
  const std::size_t n = x0.size();
  int evals = 0;
  std::pair<const Objective*, int*> payload{&f, &evals};
  gsl_multimin_function fn{&trampoline, n, &payload};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t k = 0; k < n; ++k) {
    gsl_vector_set(x, k, x0[k]);
    gsl_vector_set(ss, k, step[k]);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
    if (s->fval <= stop_below) break;
  }
  MinResult r{std::vector<double>(n), s->fval, evals};
  for (std::size_t k = 0; k < n; ++k) r.x[k] = gsl_vector_get(s->x, k);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return r;
}

// ---- Möbius fit -------------------------------------------------------------

struct FitProblem {
  const std::vector<std::pair<Complex, Complex>>* samples;
  std::array<ExtComplex, 3> ref;

  bool map_of(const double* p, MoebiusMap& out) const {
    const std::array<ExtComplex, 3> img{Complex(p[0], p[1]), Complex(p[2], p[3]),
                                        Complex(p[4], p[5])};
    try {
      out = fit_three_points(ref, img);
    } catch (const std::invalid_argument&) {
      return false;
    }
    return true;
  }

  double error(const MoebiusMap& T, std::size_t k) const {
    const auto& [z, w] = (*samples)[k];
    const ExtComplex t = T.apply(z);
    if (t.is_infinite()) return 1e15;
    return std::min(std::abs(t.value() - w), 1e15);
  }

  double sum_squares(const double* p) const {
    MoebiusMap T;
    if (!map_of(p, T)) return 1e30;
    double s = 0.0;
    for (std::size_t k = 0; k < samples->size(); ++k) {
      const double e = error(T, k);
      s += e * e;
    }
    return s;
  }

  double sup(const double* p) const {
    MoebiusMap T;
    if (!map_of(p, T)) return 1e30;
    double s = 0.0;
    for (std::size_t k = 0; k < samples->size(); ++k) s = std::max(s, error(T, k));
    return s;
  }
};

std::array<std::size_t, 3> spread_triple(const std::vector<std::pair<Complex, Complex>>& s) {
  std::size_t i1 = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::abs(s[k].first - s[0].first) > std::abs(s[i1].first - s[0].first)) i1 = k;
  }
  std::size_t i2 = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double d = std::min(std::abs(s[k].first - s[0].first), std::abs(s[k].first - s[i1].first));
    if (d > best) {
      best = d;
      i2 = k;
    }
  }
  if (!(best > 1e-12)) throw std::invalid_argument("mobius_fit_residual: fewer than 3 distinct sources");
  return {0, i1, i2};
}

}  // namespace

std::vector<std::pair<Complex, Complex>> piecewise_translation_samples(double a, double b, int count,
                                                                       double r_in, double r_out) {
  if (count < 2 || !(r_in > 0.0) || !(r_out > r_in)) {
    throw std::invalid_argument("piecewise_translation_samples: need count >= 2 and 0 < r_in < r_out");
  }
  std::vector<std::pair<Complex, Complex>> s;
  s.reserve(2 * count);
  for (int k = 0; k < count; ++k) {
    const Complex z = std::polar(r_in, 2.0 * std::numbers::pi * k / count);
    s.emplace_back(z, z + a);
  }
  for (int k = 0; k < count; ++k) {
    const Complex z = std::polar(r_out, 2.0 * std::numbers::pi * k / count);
    s.emplace_back(z, z + b);
  }
  return s;
}

MoebiusFit mobius_fit_residual(const std::vector<std::pair<Complex, Complex>>& samples,
                               const MoebiusFitOptions& opt) {
  if (samples.size() < 4) throw std::invalid_argument("mobius_fit_residual: needs >= 4 samples");
  for (const auto& [z, w] : samples) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(w.real()) ||
        !std::isfinite(w.imag())) {
      throw std::invalid_argument("mobius_fit_residual: non-finite sample");
    }
  }
  {
    std::vector<std::pair<Complex, Complex>> swapped;
    swapped.reserve(samples.size());
    for (const auto& [z, w] : samples) swapped.push_back({w, z});
    (void)spread_triple(swapped);
  }
  const std::array<std::size_t, 3> ref = spread_triple(samples);
  FitProblem prob{&samples, {samples[ref[0]].first, samples[ref[1]].first, samples[ref[2]].first}};

  double scale = 0.0;
  for (const auto& [z, w] : samples) scale = std::max(scale, std::abs(w - samples[0].second));

  std::mt19937_64 rng(opt.seed);
  std::vector<std::vector<double>> starts;
  auto push_start = [&](const MoebiusMap& T) {
    std::vector<double> p(6);
    for (int j = 0; j < 3; ++j) {
      const ExtComplex v = T.apply(prob.ref[j]);
      if (v.is_infinite()) return;
      p[2 * j] = v.value().real();
      p[2 * j + 1] = v.value().imag();
    }
    starts.push_back(std::move(p));
  };
  push_start(fit_three_points(prob.ref, {samples[ref[0]].second, samples[ref[1]].second,
                                         samples[ref[2]].second}));
  const std::size_t n = samples.size();
  for (int attempt = 0; static_cast<int>(starts.size()) < opt.starts && attempt < 50 * opt.starts;
       ++attempt) {
    const std::size_t a = static_cast<std::size_t>(unit_uniform(rng) * n) % n;
    const std::size_t b = static_cast<std::size_t>(unit_uniform(rng) * n) % n;
    const std::size_t c = static_cast<std::size_t>(unit_uniform(rng) * n) % n;
    try {
      push_start(fit_three_points({samples[a].first, samples[b].first, samples[c].first},
                                  {samples[a].second, samples[b].second, samples[c].second}));
    } catch (const std::invalid_argument&) {
    }
  }

  const Objective ls = [&](const double* p) { return prob.sum_squares(p); };
  const Objective sup = [&](const double* p) { return prob.sup(p); };
  std::vector<double> best;
  double best_sup = INFINITY;
  for (const auto& p0 : starts) {
    std::vector<double> step(6);
    for (int k = 0; k < 6; ++k) step[k] = std::max(1e-3, 0.05 * std::max(std::abs(p0[k]), scale));
    if (sup(p0.data()) <= best_sup) {
      best_sup = sup(p0.data());
      best = p0;
    }
    const MinResult r = nelder_mead(ls, p0, step, opt.max_iter, 1e-13);
    const double s = sup(r.x.data());
    if (s < best_sup) {
      best_sup = s;
      best = r.x;
    }
  }
  // minimax polish from the best least-squares candidate
  std::vector<double> step(6);
  for (int k = 0; k < 6; ++k) step[k] = std::max(1e-4, 0.01 * std::max(std::abs(best[k]), scale));
  const MinResult polished = nelder_mead(sup, best, step, opt.max_iter, 1e-13);
  if (polished.value < best_sup) {
    best_sup = polished.value;
    best = polished.x;
  }

  MoebiusFit out;
  if (!prob.map_of(best.data(), out.map)) {
    throw std::invalid_argument("mobius_fit_residual: degenerate sample geometry");
  }
  out.residual = prob.sup(best.data());
  return out;
}

// ---- welding equivalence ----------------------------------------------------

namespace {

constexpr double kMaxRadius = 0.999;

DiskAutomorphism automorphism_of(const double* p) {
  const double r = std::hypot(p[1], p[2]);
  Complex w = 0.0;
  if (r > 0.0) w = Complex(p[1], p[2]) * (kMaxRadius * std::tanh(r) / r);
  return DiskAutomorphism(p[0], w);
}

void params_of(const DiskAutomorphism& A, double* p) {
  p[0] = A.alpha();
  const double m = std::abs(A.center());
  if (m == 0.0) {
    p[1] = p[2] = 0.0;
    return;
  }
  const double r = std::atanh(std::min(m / kMaxRadius, 1.0 - 1e-12));
  p[1] = A.center().real() / m * r;
  p[2] = A.center().imag() / m * r;
}

// Angles where the slope of h changes most sharply, at least 2π/24 apart, strongest first.
std::vector<double> landmarks(const CircleHomeo& h, std::size_t count) {
  constexpr int M = 1024;
  constexpr int w = 8;
  std::vector<double> v(M + 2 * w + 1);
  for (int k = -w; k <= M + w; ++k) v[k + w] = h.evaluate_lift(kTwoPi * k / M);
  std::vector<std::pair<double, int>> score(M);
  for (int k = 0; k < M; ++k) {
    const double left = v[k + w] - v[k];
    const double right = v[k + 2 * w] - v[k + w];
    score[k] = {std::abs(std::log(right / left)), k};
  }
  std::stable_sort(score.begin(), score.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<double> out;
  for (const auto& [sc, k] : score) {
    if (out.size() == count || !(sc > 0.05)) break;
    const double t = kTwoPi * k / M;
    bool apart = true;
    for (double u : out) apart = apart && circle_distance(t, u) >= kTwoPi / 24.0;
    if (apart) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DiskAutomorphism to_disk_automorphism(const MoebiusMap& M) {
  const ExtComplex w0 = M.inverse().apply(Complex(0.0));
  if (w0.is_infinite() || !(std::abs(w0.value()) < 1.0)) {
    throw std::invalid_argument("to_disk_automorphism: map does not preserve the disk");
  }
  const Complex w = w0.value();
  const Complex z = (std::abs(w) > 1e-8) ? -w / std::abs(w) : Complex(1.0);
  const ExtComplex Mz = M.apply(z);
  if (Mz.is_infinite()) throw std::invalid_argument("to_disk_automorphism: map does not preserve the disk");
  const Complex rot = Mz.value() * (1.0 - std::conj(w) * z) / (z - w);
  if (std::abs(std::abs(rot) - 1.0) > 1e-6) {
    throw std::invalid_argument("to_disk_automorphism: map does not preserve the disk");
  }
  return DiskAutomorphism(std::arg(rot), w);
}

double equivalence_residual(const CircleHomeo& h1, const CircleHomeo& h2,
                            const DiskAutomorphism& A, const DiskAutomorphism& B,
                            const SampleGrid& grid) {
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (int k = 0; k < grid.count; ++k) {
    const double t = grid.angle(k);
    const double lhs = B.act_on_angle(h1.evaluate(A.act_on_angle(t)));
    best = std::max(best, circle_distance(lhs, h2.evaluate_lift(t)));
  }
  return best;
}

EquivalenceResult welding_equivalence(const CircleHomeo& h1, const CircleHomeo& h2, double tol,
                                      const EquivalenceOptions& opt) {
  if (!(tol > 0.0)) throw std::invalid_argument("welding_equivalence: tol must be positive");
  const SampleGrid grid(opt.grid);
  const Objective sup = [&](const double* p) {
    return equivalence_residual(h1, h2, automorphism_of(p), automorphism_of(p + 3), grid);
  };

  // B is fixed by A through B(h1(A(t_j))) = h2(t_j) on the anchor triple t_j = 2πj/3
  auto aligned = [&](const double* a, double* p) {
    std::copy(a, a + 3, p);
    p[3] = p[4] = p[5] = 0.0;
    const DiskAutomorphism A = automorphism_of(a);
    std::array<ExtComplex, 3> src, dst;
    for (int j = 0; j < 3; ++j) {
      const double t = kTwoPi * j / 3.0;
      src[j] = std::polar(1.0, h1.evaluate(A.act_on_angle(t)));
      dst[j] = std::polar(1.0, h2.evaluate(t));
    }
    try {
      params_of(to_disk_automorphism(fit_three_points(src, dst)), p + 3);
      return true;
    } catch (const std::invalid_argument&) {
      return false;
    }
  };
  // symmetric graph discrepancy: forward maps on the grid plus inverse maps on the grid
  const CircleHomeo h1inv = invert(h1);
  const CircleHomeo h2inv = invert(h2);
  const Objective profile = [&](const double* a) {
    double p[6];
    if (!aligned(a, p)) return 1e30;
    const DiskAutomorphism A = automorphism_of(p);
    const DiskAutomorphism B = automorphism_of(p + 3);
    const MoebiusMap Ainv = A.to_moebius().inverse();
    const MoebiusMap Binv = B.to_moebius().inverse();
    double s = 0.0;
    for (int k = 0; k < grid.count; ++k) {
      const double t = grid.angle(k);
      const double d = circle_distance(B.act_on_angle(h1.evaluate(A.act_on_angle(t))), h2.evaluate(t));
      const double e = circle_distance(boundary_angle(Ainv, h1inv.evaluate(boundary_angle(Binv, t))),
                                       h2inv.evaluate(t));
      s += d * d + e * e;
    }
    return std::sqrt(s / grid.count);
  };

  std::mt19937_64 rng(opt.seed);
  EquivalenceResult out;

  // starts for A: identity, then landmark matchings ranked by the profile, then random
  std::vector<std::vector<double>> starts{std::vector<double>(3, 0.0)};
  {
    const std::vector<double> l1 = landmarks(h1, 6);
    const std::vector<double> l2 = landmarks(h2, 3);
    std::vector<std::pair<double, std::vector<double>>> ranked;
    if (l2.size() == 3) {
      const std::size_t K = l1.size();
      for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
          for (std::size_t k = j + 1; k < K; ++k) {
            const std::array<double, 3> tri{l1[i], l1[j], l1[k]};
            for (int rot = 0; rot < 3; ++rot) {
              std::array<ExtComplex, 3> src, dst;
              for (int m = 0; m < 3; ++m) {
                src[m] = std::polar(1.0, l2[m]);
                dst[m] = std::polar(1.0, tri[(m + rot) % 3]);
              }
              try {
                std::vector<double> cand(3);
                params_of(to_disk_automorphism(fit_three_points(src, dst)), cand.data());
                const double v = profile(cand.data());
                ++out.evaluations;
                ranked.push_back({v, cand});
              } catch (const std::invalid_argument&) {
              }
            }
          }
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t k = 0; k < ranked.size() && static_cast<int>(starts.size()) < opt.restarts / 2; ++k) {
      starts.push_back(ranked[k].second);
    }
  }
  while (static_cast<int>(starts.size()) < opt.restarts) {
    const DiskAutomorphism A(kTwoPi * unit_uniform(rng),
                             std::polar(0.9 * std::sqrt(unit_uniform(rng)), kTwoPi * unit_uniform(rng)));
    std::vector<double> cand(3);
    params_of(A, cand.data());
    starts.push_back(cand);
  }

  std::vector<double> best(6, 0.0);
  double best_value = INFINITY;
  const double target = 0.1 * tol;
  const int profile_iter = opt.max_iter / 2;
  for (int r = 0; r < opt.restarts && best_value > target; ++r) {
    const std::vector<double>& a = starts[r];
    const MinResult ma = nelder_mead(profile, a, {0.3, 0.3, 0.3}, profile_iter, 1e-10);
    out.evaluations += ma.evaluations;
    std::vector<double> p(6);
    if (!aligned(ma.x.data(), p.data())) continue;
    const MinResult mp =
        nelder_mead(sup, p, std::vector<double>(6, 1e-3), opt.max_iter - profile_iter, 1e-13, target);
    out.evaluations += mp.evaluations;
    const double v0 = sup(p.data());
    if (v0 < best_value) {
      best_value = v0;
      best = p;
    }
    if (mp.value < best_value) {
      best_value = mp.value;
      best = mp.x;
    }
  }
  out.A = automorphism_of(best.data());
  out.B = automorphism_of(best.data() + 3);
  out.residual = equivalence_residual(h1, h2, out.A, out.B, grid);
  out.equivalent = out.residual <= tol;
  return out;
}

CircleHomeo conjugate_homeo(const CircleHomeo& h, const DiskAutomorphism& A,
                            const DiskAutomorphism& B, int extra) {
  const MoebiusMap Ainv = A.to_moebius().inverse();
  std::vector<double> ts;
  ts.reserve(h.size() + extra);
  for (const Breakpoint& b : h.breakpoints()) ts.push_back(b.theta);
  for (int k = 0; k < extra; ++k) ts.push_back(kTwoPi * k / extra);
  std::vector<Breakpoint> pts;
  pts.reserve(ts.size());
  for (double t : ts) pts.push_back({boundary_angle(Ainv, t), B.act_on_angle(h.evaluate(t))});
  std::sort(pts.begin(), pts.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.theta < b.theta; });
  std::vector<Breakpoint> bp;
  bp.reserve(pts.size());
  double lift = 0.0;
  for (const Breakpoint& p : pts) {
    double psi = p.psi + lift;
    if (!bp.empty() && psi <= bp.back().psi - std::numbers::pi) {
      lift += kTwoPi;
      psi += kTwoPi;
    }
    if (!bp.empty() && !(p.theta > bp.back().theta && psi > bp.back().psi)) continue;
    bp.push_back({p.theta, psi});
  }
  return CircleHomeo(std::move(bp));
}

}  // namespace weldlab
