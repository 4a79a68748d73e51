#include "bloch/disc.hpp"

#include <cmath>
#include <sstream>

#include "bloch/errors.hpp"

namespace bloch {

DiscPoint::DiscPoint(Complex value) : value_(value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw InvalidArgument("disc point must be finite");
  }
  if (std::abs(value) >= 1.0) {
    std::ostringstream os;
    os.precision(17);
    os << "point (" << value.real() << ", " << value.imag() << ") lies outside the open unit disc";
    throw InvalidArgument(os.str());
  }
}

MobiusMap::MobiusMap(Complex rotation, DiscPoint center) : rotation_(rotation), center_(center) {
  if (std::abs(std::abs(rotation) - 1.0) > 1e-12) {
    throw InvalidArgument("mobius rotation must be unimodular");
  }
}

Complex MobiusMap::apply_raw(Complex z) const noexcept {
  const Complex a = center_.value();
  return rotation_ * (a - z) / (1.0 - std::conj(a) * z);
}

Complex MobiusMap::derivative_raw(Complex z) const noexcept {
  const Complex a = center_.value();
  const Complex den = 1.0 - std::conj(a) * z;
  return rotation_ * (std::norm(a) - 1.0) / (den * den);
}

bool MobiusMap::is_identity(double tol) const noexcept {
  return std::abs(center_.value()) <= tol && std::abs(rotation_ + 1.0) <= tol;
}

DiscPoint mobius_apply(const MobiusMap& phi, DiscPoint z) {
  return DiscPoint(phi.apply_raw(z.value()));
}

Complex mobius_derivative(const MobiusMap& phi, DiscPoint z) {
  return phi.derivative_raw(z.value());
}

MobiusMap mobius_inverse(const MobiusMap& phi) {
  // w = l (a - z)/(1 - conj(a) z)  <=>  z = conj(l) (l a - w)/(1 - conj(l a) w).
  const Complex l = phi.rotation();
  const Complex a = phi.center().value();
  return MobiusMap(std::conj(l), DiscPoint(l * a));
}

MobiusMap mobius_compose(const MobiusMap& outer, const MobiusMap& inner) {
  // The composite vanishes at inner^{-1}(outer.center), and its derivative at 0
  // equals rotation * (|center|^2 - 1).
  const DiscPoint center = mobius_apply(mobius_inverse(inner), outer.center());
  const Complex d0 = outer.derivative_raw(inner.apply_raw(0.0)) * inner.derivative_raw(0.0);
  Complex rotation = d0 / (std::norm(center.value()) - 1.0);
  rotation /= std::abs(rotation);
  return MobiusMap(rotation, center);
}

}  // namespace bloch
