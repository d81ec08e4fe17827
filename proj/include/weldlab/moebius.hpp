#pragma once

#include <array>
#include <complex>
#include <vector>

namespace weldlab {

using Complex = std::complex<double>;

/// A point of the Riemann sphere: a finite complex number or infinity.
class ExtComplex {
 public:
  ExtComplex() = default;
  ExtComplex(Complex z) : value_(z) {}  // NOLINT(google-explicit-constructor)
  ExtComplex(double x) : value_(x, 0.0) {}  // NOLINT(google-explicit-constructor)

  static ExtComplex infinity() {
    ExtComplex p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// Finite value; meaningless when is_infinite().
  Complex value() const { return value_; }

 private:
  Complex value_{0.0, 0.0};
  bool infinite_ = false;
};

/// Chordal distance on the sphere, in [0, 2].
double chordal_distance(const ExtComplex& p, const ExtComplex& q);

/// z -> (az + b) / (cz + d), coefficients normalized so the largest modulus is 1.
class MoebiusMap {
 public:
  /// Identity.
  MoebiusMap();
  /// Throws std::invalid_argument when ad - bc == 0 exactly.
  MoebiusMap(Complex a, Complex b, Complex c, Complex d);

  static MoebiusMap identity() { return {}; }
  static MoebiusMap translation(Complex t) { return {1.0, t, 0.0, 1.0}; }
  static MoebiusMap scaling(Complex s) { return {s, 0.0, 0.0, 1.0}; }
  static MoebiusMap rotation(double alpha) { return {std::polar(1.0, alpha), 0.0, 0.0, 1.0}; }

  Complex a() const { return m_[0]; }
  Complex b() const { return m_[1]; }
  Complex c() const { return m_[2]; }
  Complex d() const { return m_[3]; }
  const std::array<Complex, 4>& coefficients() const { return m_; }

  ExtComplex operator()(const ExtComplex& z) const { return apply(z); }
  ExtComplex apply(const ExtComplex& z) const;
  /// Finite-argument convenience; returns a huge value rather than infinity at poles.
  Complex apply_finite(Complex z) const;

  MoebiusMap inverse() const;

  /// Equal as projective maps: coefficient quadruples agree up to a common scalar.
  bool approx_equal(const MoebiusMap& other, double tol) const;

 private:
  std::array<Complex, 4> m_;
};

/// (A ∘ B)(z) = A(B(z)).
MoebiusMap compose(const MoebiusMap& A, const MoebiusMap& B);
MoebiusMap inverse(const MoebiusMap& A);
ExtComplex apply(const MoebiusMap& A, const ExtComplex& z);

/// Upper half-plane onto the unit disk, z -> (z - i)/(z + i); sends ∞ to 1.
MoebiusMap cayley();

/// cayley ∘ (z + t) ∘ cayley⁻¹ for any real t.
MoebiusMap conjugated_translation(double t);

/// Parabolic disk automorphism fixing 1, conjugate to z -> z + a. Requires a > 0.
MoebiusMap parabolic_disk(double a);

struct FixedPointSet {
  bool all = false;                 ///< identity map
  std::vector<ExtComplex> points;   ///< one (parabolic) or two points otherwise
};

FixedPointSet fixed_points(const MoebiusMap& A);

/// The unique map sending src[k] to dst[k]. Throws std::invalid_argument when a
/// triple has coincident points.
MoebiusMap fit_three_points(const std::array<ExtComplex, 3>& src,
                            const std::array<ExtComplex, 3>& dst);

/// (z1, z2; z3, z4) = ((z1 - z3)(z2 - z4)) / ((z2 - z3)(z1 - z4)) for finite distinct points.
Complex cross_ratio(Complex z1, Complex z2, Complex z3, Complex z4);

/// z -> e^{iα}(z - w)/(1 - conj(w) z) with |w| < 1.
class DiskAutomorphism {
 public:
  DiskAutomorphism() = default;
  /// Throws std::invalid_argument unless |w| < 1.
  DiskAutomorphism(double alpha, Complex w);

  double alpha() const { return alpha_; }
  Complex center() const { return w_; }
  MoebiusMap to_moebius() const;
  /// Action on the circle in angle coordinates; result in [0, 2π).
  double act_on_angle(double theta) const;

 private:
  double alpha_ = 0.0;
  Complex w_{0.0, 0.0};
};

/// True when A maps the unit circle into itself at `samples` equispaced points.
bool preserves_unit_circle(const MoebiusMap& A, int samples, double tol);

}  // namespace weldlab
