#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bloch/disc.hpp"

namespace bloch {

enum class NormKind { euclidean, sup };

/// Norm of a vector of C^d under the chosen flavor.
double vector_norm(std::span<const Complex> x, NormKind kind);
/// Norm of the functional x -> sum_j xs_j x_j on (C^d, kind), i.e. the dual norm.
double dual_norm(std::span<const Complex> xs, NormKind kind);
/// A functional of dual norm 1 with xs(x) = ||x||. Requires x != 0.
std::vector<Complex> norming_functional(std::span<const Complex> x, NormKind kind);

/// Value of a vector-valued function, with the norm flavor used to measure it.
struct VectorValue {
  std::vector<Complex> components;
  NormKind flavor = NormKind::euclidean;

  std::size_t dimension() const noexcept { return components.size(); }
  double norm() const { return vector_norm(components, flavor); }
};

/// Immutable expression tree for a holomorphic map D -> C^d. Copies share
/// structure; every operation is pure.
///
/// Scalar nodes (dimension 1): monomial, extremal, taylor. `tensor` lifts a
/// scalar child to C^d; `sum`, `scale` and `precompose_mobius` keep the
/// dimension of their children.
class HoloExpr {
public:
  enum class Kind { monomial, extremal, sum, scale, precompose_mobius, tensor, taylor };

  static HoloExpr monomial(int degree);
  /// f_a(w) = (1 - |a|^2) w / (1 - conj(a) w).
  static HoloExpr extremal(DiscPoint a);
  static HoloExpr sum(std::vector<HoloExpr> children);
  static HoloExpr scale(Complex coefficient, HoloExpr child);
  static HoloExpr precompose(MobiusMap phi, HoloExpr child);
  static HoloExpr tensor(HoloExpr scalar_child, std::vector<Complex> x);
  static HoloExpr taylor(std::vector<Complex> coefficients, double radius = 0.95);
  /// Constant map with the given value (monomial(0), scaled or tensored).
  static HoloExpr constant(std::span<const Complex> value);

  Kind kind() const noexcept;
  std::size_t dimension() const noexcept;

  int degree() const;                        // monomial
  DiscPoint center() const;                  // extremal
  const std::vector<HoloExpr>& children() const;  // sum
  Complex coefficient() const;               // scale
  const HoloExpr& child() const;             // scale, precompose_mobius, tensor
  const MobiusMap& map() const;              // precompose_mobius
  const std::vector<Complex>& vector() const;     // tensor
  const std::vector<Complex>& coefficients() const;  // taylor
  double radius() const;                     // taylor

  /// Evaluation at a raw complex point inside the disc. Throws OutOfValidity
  /// when a taylor node is queried beyond its radius.
  std::vector<Complex> value_at(Complex z) const;
  std::vector<Complex> derivative_at(Complex z) const;
  /// Fast paths for dimension-1 expressions.
  Complex scalar_value_at(Complex z) const;
  Complex scalar_derivative_at(Complex z) const;

  bool contains_taylor() const;
  /// Smallest validity radius among taylor nodes reachable without passing
  /// through a precompose node; 1 when there are none.
  double direct_validity_radius() const;
  bool contains_precomposed_taylor() const;

private:
  struct Node;
  explicit HoloExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

VectorValue holo_eval(const HoloExpr& f, DiscPoint z, NormKind flavor = NormKind::euclidean);
VectorValue holo_deriv(const HoloExpr& f, DiscPoint z, NormKind flavor = NormKind::euclidean);

/// g = f - f(0), keeping the derivative unchanged.
HoloExpr normalize_origin(const HoloExpr& f);

/// f ∘ phi with the composition pushed through sums, scales and tensors so
/// nested automorphisms fuse into one map; constants pass through unchanged.
HoloExpr compose_mobius(const HoloExpr& f, const MobiusMap& phi);

/// Canonical form: flattened sums, fused constants, identity maps removed,
/// constants of modulus below `zero_tol` dropped.
HoloExpr simplify(const HoloExpr& f, double zero_tol = 1e-13);

/// Structural equality with numeric tolerance on every stored number.
bool approx_equal(const HoloExpr& a, const HoloExpr& b, double tol = 1e-10);

/// Coefficient vectors c_0..c_N when f is a polynomial map (built from
/// monomials, taylor nodes, sums, scales and tensors only).
std::optional<std::vector<std::vector<Complex>>> polynomial_coefficients(const HoloExpr& f);

}  // namespace bloch
