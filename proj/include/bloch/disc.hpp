#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace bloch {

using Complex = std::complex<double>;

/// A point of the open unit disc. Construction rejects |z| >= 1 (and
/// non-finite input) with InvalidArgument.
class DiscPoint {
public:
  DiscPoint() = default;
  explicit DiscPoint(Complex value);
  DiscPoint(double re, double im) : DiscPoint(Complex(re, im)) {}

  Complex value() const noexcept { return value_; }
  double modulus() const noexcept { return std::abs(value_); }
  /// 1 - |z|^2, the Bloch weight at this point.
  double weight() const noexcept { return 1.0 - std::norm(value_); }

  friend bool operator==(const DiscPoint&, const DiscPoint&) = default;

private:
  Complex value_{0.0, 0.0};
};

/// Disc automorphism z -> rotation * (center - z) / (1 - conj(center) z).
class MobiusMap {
public:
  MobiusMap() = default;
  /// Rejects |rotation| differing from 1 by more than 1e-12.
  MobiusMap(Complex rotation, DiscPoint center);

  static MobiusMap involution(DiscPoint center) { return {Complex(1.0, 0.0), center}; }
  /// The rotation z -> lambda z, written in the stored normal form.
  static MobiusMap rotation_by(Complex lambda) { return {-lambda, DiscPoint()}; }
  static MobiusMap identity() { return rotation_by(Complex(1.0, 0.0)); }

  Complex rotation() const noexcept { return rotation_; }
  DiscPoint center() const noexcept { return center_; }

  /// Evaluates on a raw complex value; callers guarantee |z| < 1/|center|.
  Complex apply_raw(Complex z) const noexcept;
  Complex derivative_raw(Complex z) const noexcept;

  bool is_identity(double tol = 1e-12) const noexcept;

  friend bool operator==(const MobiusMap&, const MobiusMap&) = default;

private:
  Complex rotation_{-1.0, 0.0};
  DiscPoint center_{};
};

DiscPoint mobius_apply(const MobiusMap& phi, DiscPoint z);
Complex mobius_derivative(const MobiusMap& phi, DiscPoint z);
MobiusMap mobius_inverse(const MobiusMap& phi);
/// outer ∘ inner, brought back to normal form.
MobiusMap mobius_compose(const MobiusMap& outer, const MobiusMap& inner);

}  // namespace bloch
