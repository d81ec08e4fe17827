#include "weldlab/zipper.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace weldlab {

namespace {

constexpr Complex kI{0.0, 1.0};

// Real-axis action of the step map x -> sign(w) sqrt(w² + c²), w = x / (1 - x·invb).
inline double step_real(double x, double invb, double c) {
  const double w = x / (1.0 - x * invb);
  return std::copysign(std::hypot(w, c), w);
}

inline Complex step_complex(Complex z, double invb, double c) {
  const Complex w = z / (1.0 - z * invb);
  return kI * std::sqrt(-(w * w + c * c));
}

template <bool Parallel>
UnzipResult unzip_impl(std::span<const Complex> z) {
  const int n = static_cast<int>(z.size());
  if (n < 3) throw std::invalid_argument("unzip: needs at least 3 points");
  for (int k = 0; k < n; ++k) {
    if (!(std::abs(z[(k + 1) % n] - z[k]) >= 1e-12)) {
      throw std::invalid_argument("unzip: consecutive points closer than 1e-12");
    }
  }

  std::vector<Complex> zeta(n);
  std::vector<double> xi(n, 0.0), xe(n, 0.0);
#pragma omp parallel for schedule(static) if (Parallel)
  for (int k = 2; k < n; ++k) {
    zeta[k] = kI * std::sqrt((z[k] - z[1]) / (z[k] - z[0]));
  }
  double invp = 0.0;  // reciprocal of the image of point 0

  for (int k = 2; k < n; ++k) {
    const Complex a = zeta[k];
    const double na = std::norm(a);
    if (!(a.imag() > 0.0) || !(a.imag() > 1e-14 * std::sqrt(na))) {
      throw std::invalid_argument("unzip: collapsed slit at point " + std::to_string(k));
    }
    const double invb = a.real() / na;
    const double c = na / a.imag();

#pragma omp parallel for schedule(static) if (Parallel)
    for (int j = 1; j < k - 1; ++j) {
      xi[j] = step_real(xi[j], invb, c);
      xe[j] = step_real(xe[j], invb, c);
    }
    xi[k - 1] = -c;
    xe[k - 1] = c;
#pragma omp parallel for schedule(static) if (Parallel)
    for (int j = k + 1; j < n; ++j) zeta[j] = step_complex(zeta[j], invb, c);

    const double u = invp - invb;
    invp = u / std::sqrt(1.0 + c * c * u * u);
  }

  UnzipResult out;
  out.interior.assign(n, 0.0);
  out.exterior.assign(n, 0.0);
  out.interior[0] = -std::numeric_limits<double>::infinity();
  out.exterior[0] = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) if (Parallel)
  for (int j = 1; j < n - 1; ++j) {
    const double pi = xi[j] / (1.0 - xi[j] * invp);
    const double pe = xe[j] / (1.0 - xe[j] * invp);
    out.interior[j] = -pi * pi;
    out.exterior[j] = -pe * pe;
  }
  return out;
}

}  // namespace

UnzipResult unzip(std::span<const Complex> points) { return unzip_impl<true>(points); }
UnzipResult unzip_serial(std::span<const Complex> points) { return unzip_impl<false>(points); }

}  // namespace weldlab
