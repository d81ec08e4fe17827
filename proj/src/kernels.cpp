#include "weldlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gsl/gsl_integration.h>

namespace weldlab::kernels {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;  // weights summing to 2
};

GaussRule make_rule(std::size_t n) {
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) gsl_integration_glfixed_point(-1.0, 1.0, i, &r.x[i], &r.w[i], t);
  gsl_integration_glfixed_table_free(t);
  return r;
}

const GaussRule& pair_rule() {
  static const GaussRule r = make_rule(6);
  return r;
}

const GaussRule& point_rule() {
  static const GaussRule r = make_rule(8);
  return r;
}

// -log(sin(v)/v) with v = u/2; smooth for |u| < 2π.
double smooth_part(double u) {
  const double v = 0.5 * u;
  if (std::abs(v) < 1e-4) {
    const double v2 = v * v;
    return v2 / 6.0 + v2 * v2 / 180.0;
  }
  return -std::log(std::sin(v) / v);
}

// H'' = log|u|
double H2(double u) {
  if (u == 0.0) return 0.0;
  return 0.5 * u * u * std::log(std::abs(u)) - 0.75 * u * u;
}

// G' = log|u|
double G1(double u) {
  if (u == 0.0) return 0.0;
  return u * std::log(std::abs(u)) - u;
}

double nearest_shift(double from, double to) {
  return kTwoPi * std::nearbyint((from - to) / kTwoPi);
}

}  // namespace

double log_kernel(double u) { return -std::log(std::abs(std::sin(0.5 * u))); }

double cell_pair_energy(const Cell& a, const Cell& b) {
  const double wa = a.width();
  const double wb = b.width();
  // Local frame: x ∈ [-wa/2, wa/2], y ∈ [delta - wb/2, delta + wb/2].
  const double delta = (b.center() + nearest_shift(a.center(), b.center())) - a.center();
  const double gap = std::abs(delta) - 0.5 * (wa + wb);
  const GaussRule& g = pair_rule();
  const std::size_t q = g.x.size();
  if (gap < 2.0 * std::max(wa, wb)) {
    const double x0 = -0.5 * wa, x1 = 0.5 * wa;
    const double y0 = delta - 0.5 * wb, y1 = delta + 0.5 * wb;
    const double mean_log = (H2(x1 - y0) - H2(x0 - y0) - H2(x1 - y1) + H2(x0 - y1)) / (wa * wb);
    double smooth = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      const double x = 0.5 * wa * g.x[i];
      for (std::size_t j = 0; j < q; ++j) {
        const double y = delta + 0.5 * wb * g.x[j];
        smooth += g.w[i] * g.w[j] * smooth_part(x - y);
      }
    }
    return kLog2 - mean_log + 0.25 * smooth;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    const double x = 0.5 * wa * g.x[i];
    for (std::size_t j = 0; j < q; ++j) {
      const double y = delta + 0.5 * wb * g.x[j];
      acc += g.w[i] * g.w[j] * log_kernel(x - y);
    }
  }
  return 0.25 * acc;
}

double point_cell_energy(double x, const Cell& c) {
  const double w = c.width();
  const double delta = (c.center() + nearest_shift(x, c.center())) - x;
  const double dist = std::abs(delta) - 0.5 * w;
  const GaussRule& g = point_rule();
  if (dist < 2.0 * w) {
    const double y0 = delta - 0.5 * w, y1 = delta + 0.5 * w;
    const double mean_log = (G1(y1) - G1(y0)) / w;
    double smooth = 0.0;
    for (std::size_t j = 0; j < g.x.size(); ++j) smooth += g.w[j] * smooth_part(delta + 0.5 * w * g.x[j]);
    return kLog2 - mean_log + 0.5 * smooth;
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < g.x.size(); ++j) acc += g.w[j] * log_kernel(delta + 0.5 * w * g.x[j]);
  return 0.5 * acc;
}

namespace {

double atom_row(std::span<const double> theta, std::span<const double> weight, std::size_t i) {
  double row = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (j != i) row += weight[j] * log_kernel(theta[i] - theta[j]);
  }
  return weight[i] * row;
}

double plain_row(std::span<const double> theta, std::size_t i) {
  double row = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (j != i) row += log_kernel(theta[i] - theta[j]);
  }
  return row;
}

double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

double atom_pair_energy_serial(std::span<const double> theta, std::span<const double> weight) {
  std::vector<double> rows(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) rows[i] = atom_row(theta, weight, i);
  return ordered_sum(rows);
}

double atom_pair_energy(std::span<const double> theta, std::span<const double> weight) {
  const auto n = static_cast<std::ptrdiff_t>(theta.size());
  std::vector<double> rows(theta.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) rows[i] = atom_row(theta, weight, static_cast<std::size_t>(i));
  return ordered_sum(rows);
}

double normalized_pair_energy_serial(std::span<const double> theta) {
  const double n = static_cast<double>(theta.size());
  std::vector<double> rows(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) rows[i] = plain_row(theta, i);
  return ordered_sum(rows) / (n * (n - 1.0));
}

double normalized_pair_energy(std::span<const double> theta) {
  const auto n = static_cast<std::ptrdiff_t>(theta.size());
  std::vector<double> rows(theta.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) rows[i] = plain_row(theta, static_cast<std::size_t>(i));
  const double nd = static_cast<double>(n);
  return ordered_sum(rows) / (nd * (nd - 1.0));
}

Eigen::MatrixXd cell_kernel_matrix_serial(std::span<const Cell> cells) {
  const auto n = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      K(i, j) = K(j, i) = cell_pair_energy(cells[static_cast<std::size_t>(i)],
                                           cells[static_cast<std::size_t>(j)]);
    }
  }
  return K;
}

Eigen::MatrixXd cell_kernel_matrix(std::span<const Cell> cells) {
  const auto n = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXd K(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      K(i, j) = cell_pair_energy(cells[static_cast<std::size_t>(i)],
                                 cells[static_cast<std::size_t>(j)]);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) K(i, j) = K(j, i);
  }
  return K;
}

namespace {

double potential_at(std::span<const Cell> cells, std::span<const double> weight, double x) {
  double u = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (weight[j] != 0.0) u += weight[j] * point_cell_energy(x, cells[j]);
  }
  return u;
}

}  // namespace

std::vector<double> cell_potential_serial(std::span<const Cell> cells,
                                          std::span<const double> weight,
                                          std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = potential_at(cells, weight, x[i]);
  return out;
}

std::vector<double> cell_potential(std::span<const Cell> cells, std::span<const double> weight,
                                   std::span<const double> x) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> out(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = potential_at(cells, weight, x[i]);
  return out;
}

void pair_energy_derivatives(std::span<const double> theta, Eigen::VectorXd& grad,
                             Eigen::MatrixXd& hess) {
  const auto n = static_cast<Eigen::Index>(theta.size());
  const double scale = 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  grad.setZero(n);
  hess.setZero(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    double g = 0.0, diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double half = 0.5 * (theta[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(j)]);
      const double s = std::sin(half);
      const double kpp = 0.25 / (s * s);
      g += -0.5 * std::cos(half) / s;
      diag += kpp;
      hess(i, j) = -scale * kpp;
    }
    grad(i) = scale * g;
    hess(i, i) = scale * diag;
  }
}

}  // namespace weldlab::kernels
