#include "bloch/holo_expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bloch/errors.hpp"

namespace bloch {

double vector_norm(std::span<const Complex> x, NormKind kind) {
  if (kind == NormKind::sup) {
    double m = 0.0;
    for (const auto& c : x) m = std::max(m, std::abs(c));
    return m;
  }
  double s = 0.0;
  for (const auto& c : x) s += std::norm(c);
  return std::sqrt(s);
}

double dual_norm(std::span<const Complex> xs, NormKind kind) {
  if (kind == NormKind::sup) {
    double s = 0.0;
    for (const auto& c : xs) s += std::abs(c);
    return s;
  }
  return vector_norm(xs, NormKind::euclidean);
}

std::vector<Complex> norming_functional(std::span<const Complex> x, NormKind kind) {
  const double n = vector_norm(x, kind);
  if (n == 0.0) throw InvalidArgument("norming functional of the zero vector");
  std::vector<Complex> xs(x.size(), Complex(0.0, 0.0));
  if (kind == NormKind::sup) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < x.size(); ++j) {
      if (std::abs(x[j]) > std::abs(x[best])) best = j;
    }
    xs[best] = std::conj(x[best]) / std::abs(x[best]);
  } else {
    for (std::size_t j = 0; j < x.size(); ++j) xs[j] = std::conj(x[j]) / n;
  }
  return xs;
}

struct HoloExpr::Node {
  Kind kind;
  std::size_t dim = 1;
  int degree = 0;
  Complex coef{1.0, 0.0};
  DiscPoint center{};
  MobiusMap map{};
  std::vector<HoloExpr> children;
  std::vector<Complex> data;
  double radius = 1.0;
};

namespace {

Complex int_power(Complex z, int k) {
  Complex r(1.0, 0.0);
  Complex base = z;
  while (k > 0) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

void require_kind(HoloExpr::Kind have, HoloExpr::Kind want, const char* what) {
  if (have != want) throw InvalidArgument(std::string("HoloExpr accessor mismatch: ") + what);
}

void check_taylor_domain(Complex z, double radius) {
  if (std::abs(z) > radius) {
    std::ostringstream os;
    os << "taylor node evaluated at |z| = " << std::abs(z) << " beyond validity radius " << radius;
    throw OutOfValidity(os.str());
  }
}

}  // namespace

HoloExpr HoloExpr::monomial(int degree) {
  if (degree < 0) throw InvalidArgument("monomial degree must be >= 0");
  auto n = std::make_shared<Node>();
  n->kind = Kind::monomial;
  n->degree = degree;
  return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::extremal(DiscPoint a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::extremal;
  n->center = a;
  return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::sum(std::vector<HoloExpr> children) {
  if (children.empty()) throw InvalidArgument("sum node needs at least one child");
  const std::size_t d = children.front().dimension();
  for (const auto& c : children) {
    if (c.dimension() != d) throw DimensionMismatch("sum children have different dimensions");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->dim = d;
  n->children = std::move(children);
  return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::scale(Complex coefficient, HoloExpr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::scale;
  n->dim = child.dimension();
  n->coef = coefficient;
  n->children.push_back(std::move(child));
  return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::precompose(MobiusMap phi, HoloExpr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::precompose_mobius;
  n->dim = child.dimension();
  n->map = phi;
  n->children.push_back(std::move(child));
  return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::tensor(HoloExpr scalar_child, std::vector<Complex> x) {
  if (scalar_child.dimension() != 1) throw DimensionMismatch("tensor child must be scalar");
  if (x.empty()) throw InvalidArgument("tensor vector must be nonempty");
  auto n = std::make_shared<Node>();
  n->kind = Kind::tensor;
  n->dim = x.size();
  n->data = std::move(x);
  n->children.push_back(std::move(scalar_child));
  return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::taylor(std::vector<Complex> coefficients, double radius) {
  if (coefficients.empty()) throw InvalidArgument("taylor node needs at least one coefficient");
  if (!(radius > 0.0 && radius < 1.0)) throw InvalidArgument("taylor validity radius must lie in (0, 1)");
  auto n = std::make_shared<Node>();
  n->kind = Kind::taylor;
  n->data = std::move(coefficients);
  n->radius = radius;
  return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::constant(std::span<const Complex> value) {
  if (value.empty()) throw InvalidArgument("constant needs a nonempty value");
  if (value.size() == 1) return scale(value[0], monomial(0));
  return tensor(monomial(0), std::vector<Complex>(value.begin(), value.end()));
}

HoloExpr::Kind HoloExpr::kind() const noexcept { return node_->kind; }
std::size_t HoloExpr::dimension() const noexcept { return node_->dim; }

int HoloExpr::degree() const {
  require_kind(kind(), Kind::monomial, "degree");
  return node_->degree;
}
DiscPoint HoloExpr::center() const {
  require_kind(kind(), Kind::extremal, "center");
  return node_->center;
}
const std::vector<HoloExpr>& HoloExpr::children() const {
  require_kind(kind(), Kind::sum, "children");
  return node_->children;
}
Complex HoloExpr::coefficient() const {
  require_kind(kind(), Kind::scale, "coefficient");
  return node_->coef;
}
const HoloExpr& HoloExpr::child() const {
  if (kind() != Kind::scale && kind() != Kind::precompose_mobius && kind() != Kind::tensor) {
    throw InvalidArgument("HoloExpr accessor mismatch: child");
  }
  return node_->children.front();
}
const MobiusMap& HoloExpr::map() const {
  require_kind(kind(), Kind::precompose_mobius, "map");
  return node_->map;
}
const std::vector<Complex>& HoloExpr::vector() const {
  require_kind(kind(), Kind::tensor, "vector");
  return node_->data;
}
const std::vector<Complex>& HoloExpr::coefficients() const {
  require_kind(kind(), Kind::taylor, "coefficients");
  return node_->data;
}
double HoloExpr::radius() const {
  require_kind(kind(), Kind::taylor, "radius");
  return node_->radius;
}

Complex HoloExpr::scalar_value_at(Complex z) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::monomial:
      return int_power(z, n.degree);
    case Kind::extremal: {
      const Complex a = n.center.value();
      return (1.0 - std::norm(a)) * z / (1.0 - std::conj(a) * z);
    }
    case Kind::sum: {
      Complex s(0.0, 0.0);
      for (const auto& c : n.children) s += c.scalar_value_at(z);
      return s;
    }
    case Kind::scale:
      return n.coef * n.children.front().scalar_value_at(z);
    case Kind::precompose_mobius:
      return n.children.front().scalar_value_at(n.map.apply_raw(z));
    case Kind::tensor:
      return n.data.front() * n.children.front().scalar_value_at(z);
    case Kind::taylor: {
      check_taylor_domain(z, n.radius);
      Complex s(0.0, 0.0);
      for (auto it = n.data.rbegin(); it != n.data.rend(); ++it) s = s * z + *it;
      return s;
    }
  }
  return {};
}

Complex HoloExpr::scalar_derivative_at(Complex z) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::monomial:
      return n.degree == 0 ? Complex(0.0, 0.0) : static_cast<double>(n.degree) * int_power(z, n.degree - 1);
    case Kind::extremal: {
      const Complex a = n.center.value();
      const Complex den = 1.0 - std::conj(a) * z;
      return (1.0 - std::norm(a)) / (den * den);
    }
    case Kind::sum: {
      Complex s(0.0, 0.0);
      for (const auto& c : n.children) s += c.scalar_derivative_at(z);
      return s;
    }
    case Kind::scale:
      return n.coef * n.children.front().scalar_derivative_at(z);
    case Kind::precompose_mobius:
      return n.children.front().scalar_derivative_at(n.map.apply_raw(z)) * n.map.derivative_raw(z);
    case Kind::tensor:
      return n.data.front() * n.children.front().scalar_derivative_at(z);
    case Kind::taylor: {
      check_taylor_domain(z, n.radius);
      Complex s(0.0, 0.0);
      for (std::size_t k = n.data.size() - 1; k >= 1; --k) {
        s = s * z + static_cast<double>(k) * n.data[k];
      }
      return s;
    }
  }
  return {};
}

std::vector<Complex> HoloExpr::value_at(Complex z) const {
  const Node& n = *node_;
  if (n.dim == 1) return {scalar_value_at(z)};
  switch (n.kind) {
    case Kind::sum: {
      std::vector<Complex> s(n.dim, Complex(0.0, 0.0));
      for (const auto& c : n.children) {
        const auto v = c.value_at(z);
        for (std::size_t j = 0; j < n.dim; ++j) s[j] += v[j];
      }
      return s;
    }
    case Kind::scale: {
      auto v = n.children.front().value_at(z);
      for (auto& c : v) c *= n.coef;
      return v;
    }
    case Kind::precompose_mobius:
      return n.children.front().value_at(n.map.apply_raw(z));
    case Kind::tensor: {
      const Complex g = n.children.front().scalar_value_at(z);
      std::vector<Complex> v(n.data);
      for (auto& c : v) c *= g;
      return v;
    }
    default:
      break;
  }
  throw InvalidArgument("vector evaluation of a scalar node");
}

std::vector<Complex> HoloExpr::derivative_at(Complex z) const {
  const Node& n = *node_;
  if (n.dim == 1) return {scalar_derivative_at(z)};
  switch (n.kind) {
    case Kind::sum: {
      std::vector<Complex> s(n.dim, Complex(0.0, 0.0));
      for (const auto& c : n.children) {
        const auto v = c.derivative_at(z);
        for (std::size_t j = 0; j < n.dim; ++j) s[j] += v[j];
      }
      return s;
    }
    case Kind::scale: {
      auto v = n.children.front().derivative_at(z);
      for (auto& c : v) c *= n.coef;
      return v;
    }
    case Kind::precompose_mobius: {
      auto v = n.children.front().derivative_at(n.map.apply_raw(z));
      const Complex d = n.map.derivative_raw(z);
      for (auto& c : v) c *= d;
      return v;
    }
    case Kind::tensor: {
      const Complex g = n.children.front().scalar_derivative_at(z);
      std::vector<Complex> v(n.data);
      for (auto& c : v) c *= g;
      return v;
    }
    default:
      break;
  }
  throw InvalidArgument("vector differentiation of a scalar node");
}

bool HoloExpr::contains_taylor() const {
  if (kind() == Kind::taylor) return true;
  for (const auto& c : node_->children) {
    if (c.contains_taylor()) return true;
  }
  return false;
}

double HoloExpr::direct_validity_radius() const {
  if (kind() == Kind::taylor) return node_->radius;
  if (kind() == Kind::precompose_mobius) return 1.0;
  double r = 1.0;
  for (const auto& c : node_->children) r = std::min(r, c.direct_validity_radius());
  return r;
}

bool HoloExpr::contains_precomposed_taylor() const {
  if (kind() == Kind::precompose_mobius) return child().contains_taylor();
  for (const auto& c : node_->children) {
    if (c.contains_precomposed_taylor()) return true;
  }
  return false;
}

VectorValue holo_eval(const HoloExpr& f, DiscPoint z, NormKind flavor) {
  return VectorValue{f.value_at(z.value()), flavor};
}

VectorValue holo_deriv(const HoloExpr& f, DiscPoint z, NormKind flavor) {
  return VectorValue{f.derivative_at(z.value()), flavor};
}

namespace {

bool is_constant(const HoloExpr& f) {
  switch (f.kind()) {
    case HoloExpr::Kind::monomial:
      return f.degree() == 0;
    case HoloExpr::Kind::scale:
    case HoloExpr::Kind::tensor:
    case HoloExpr::Kind::precompose_mobius:
      return is_constant(f.child());
    case HoloExpr::Kind::sum:
      return std::all_of(f.children().begin(), f.children().end(), is_constant);
    case HoloExpr::Kind::taylor:
      return f.coefficients().size() == 1;
    case HoloExpr::Kind::extremal:
      return false;
  }
  return false;
}

bool all_zero(std::span<const Complex> v) {
  return std::all_of(v.begin(), v.end(), [](Complex c) { return c == Complex(0.0, 0.0); });
}

}  // namespace

HoloExpr normalize_origin(const HoloExpr& f) {
  const auto v0 = f.value_at(Complex(0.0, 0.0));
  if (all_zero(v0)) return f;
  switch (f.kind()) {
    case HoloExpr::Kind::taylor: {
      auto c = f.coefficients();
      c[0] = Complex(0.0, 0.0);
      return HoloExpr::taylor(std::move(c), f.radius());
    }
    case HoloExpr::Kind::scale:
      return HoloExpr::scale(f.coefficient(), normalize_origin(f.child()));
    case HoloExpr::Kind::tensor:
      return HoloExpr::tensor(normalize_origin(f.child()), f.vector());
    case HoloExpr::Kind::sum: {
      std::vector<HoloExpr> parts;
      for (const auto& c : f.children()) parts.push_back(normalize_origin(c));
      return HoloExpr::sum(std::move(parts));
    }
    default:
      break;
  }
  std::vector<Complex> neg(v0.size());
  for (std::size_t j = 0; j < v0.size(); ++j) neg[j] = -v0[j];
  return HoloExpr::sum({f, HoloExpr::constant(neg)});
}

HoloExpr compose_mobius(const HoloExpr& f, const MobiusMap& phi) {
  if (phi.is_identity(0.0)) return f;
  if (is_constant(f)) return f;
  switch (f.kind()) {
    case HoloExpr::Kind::sum: {
      std::vector<HoloExpr> parts;
      for (const auto& c : f.children()) parts.push_back(compose_mobius(c, phi));
      return HoloExpr::sum(std::move(parts));
    }
    case HoloExpr::Kind::scale:
      return HoloExpr::scale(f.coefficient(), compose_mobius(f.child(), phi));
    case HoloExpr::Kind::tensor:
      return HoloExpr::tensor(compose_mobius(f.child(), phi), f.vector());
    case HoloExpr::Kind::precompose_mobius: {
      const MobiusMap fused = mobius_compose(f.map(), phi);
      if (fused.is_identity()) return f.child();
      return HoloExpr::precompose(fused, f.child());
    }
    default:
      return HoloExpr::precompose(phi, f);
  }
}

HoloExpr simplify(const HoloExpr& f, double zero_tol) {
  switch (f.kind()) {
    case HoloExpr::Kind::sum: {
      std::vector<HoloExpr> flat;
      std::vector<HoloExpr> stack(f.children().rbegin(), f.children().rend());
      while (!stack.empty()) {
        HoloExpr c = simplify(stack.back(), zero_tol);
        stack.pop_back();
        if (c.kind() == HoloExpr::Kind::sum) {
          for (auto it = c.children().rbegin(); it != c.children().rend(); ++it) stack.push_back(*it);
        } else {
          flat.push_back(std::move(c));
        }
      }
      std::vector<Complex> constant(f.dimension(), Complex(0.0, 0.0));
      std::vector<HoloExpr> kept;
      for (auto& c : flat) {
        if (is_constant(c)) {
          const auto v = c.value_at(Complex(0.0, 0.0));
          for (std::size_t j = 0; j < constant.size(); ++j) constant[j] += v[j];
        } else {
          kept.push_back(std::move(c));
        }
      }
      if (vector_norm(constant, NormKind::sup) > zero_tol || kept.empty()) {
        kept.push_back(HoloExpr::constant(constant));
      }
      if (kept.size() == 1) return kept.front();
      return HoloExpr::sum(std::move(kept));
    }
    case HoloExpr::Kind::scale: {
      HoloExpr c = simplify(f.child(), zero_tol);
      if (c.kind() == HoloExpr::Kind::scale) {
        return HoloExpr::scale(f.coefficient() * c.coefficient(), c.child());
      }
      if (f.coefficient() == Complex(1.0, 0.0)) return c;
      return HoloExpr::scale(f.coefficient(), std::move(c));
    }
    case HoloExpr::Kind::precompose_mobius: {
      HoloExpr c = simplify(f.child(), zero_tol);
      if (f.map().is_identity()) return c;
      switch (c.kind()) {
        case HoloExpr::Kind::sum:
        case HoloExpr::Kind::scale:
        case HoloExpr::Kind::tensor:
        case HoloExpr::Kind::precompose_mobius:
          return simplify(compose_mobius(c, f.map()), zero_tol);
        default:
          if (is_constant(c)) return c;
          return HoloExpr::precompose(f.map(), std::move(c));
      }
    }
    case HoloExpr::Kind::tensor:
      return HoloExpr::tensor(simplify(f.child(), zero_tol), f.vector());
    default:
      return f;
  }
}

bool approx_equal(const HoloExpr& a, const HoloExpr& b, double tol) {
  if (a.kind() != b.kind() || a.dimension() != b.dimension()) return false;
  auto close = [tol](Complex x, Complex y) { return std::abs(x - y) <= tol; };
  auto close_vec = [&](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!close(x[j], y[j])) return false;
    }
    return true;
  };
  switch (a.kind()) {
    case HoloExpr::Kind::monomial:
      return a.degree() == b.degree();
    case HoloExpr::Kind::extremal:
      return close(a.center().value(), b.center().value());
    case HoloExpr::Kind::sum: {
      if (a.children().size() != b.children().size()) return false;
      for (std::size_t i = 0; i < a.children().size(); ++i) {
        if (!approx_equal(a.children()[i], b.children()[i], tol)) return false;
      }
      return true;
    }
    case HoloExpr::Kind::scale:
      return close(a.coefficient(), b.coefficient()) && approx_equal(a.child(), b.child(), tol);
    case HoloExpr::Kind::precompose_mobius:
      return close(a.map().rotation(), b.map().rotation()) &&
             close(a.map().center().value(), b.map().center().value()) &&
             approx_equal(a.child(), b.child(), tol);
    case HoloExpr::Kind::tensor:
      return close_vec(a.vector(), b.vector()) && approx_equal(a.child(), b.child(), tol);
    case HoloExpr::Kind::taylor:
      return std::abs(a.radius() - b.radius()) <= tol && close_vec(a.coefficients(), b.coefficients());
  }
  return false;
}

std::optional<std::vector<std::vector<Complex>>> polynomial_coefficients(const HoloExpr& f) {
  using Coeffs = std::vector<std::vector<Complex>>;
  const std::size_t d = f.dimension();
  switch (f.kind()) {
    case HoloExpr::Kind::monomial: {
      Coeffs c(static_cast<std::size_t>(f.degree()) + 1, std::vector<Complex>(1, Complex(0.0, 0.0)));
      c.back()[0] = Complex(1.0, 0.0);
      return c;
    }
    case HoloExpr::Kind::taylor: {
      Coeffs c;
      for (const auto& a : f.coefficients()) c.push_back({a});
      return c;
    }
    case HoloExpr::Kind::sum: {
      Coeffs total;
      for (const auto& child : f.children()) {
        auto c = polynomial_coefficients(child);
        if (!c) return std::nullopt;
        if (c->size() > total.size()) total.resize(c->size(), std::vector<Complex>(d, Complex(0.0, 0.0)));
        for (std::size_t k = 0; k < c->size(); ++k) {
          for (std::size_t j = 0; j < d; ++j) total[k][j] += (*c)[k][j];
        }
      }
      return total;
    }
    case HoloExpr::Kind::scale: {
      auto c = polynomial_coefficients(f.child());
      if (!c) return std::nullopt;
      for (auto& row : *c) {
        for (auto& v : row) v *= f.coefficient();
      }
      return c;
    }
    case HoloExpr::Kind::tensor: {
      auto c = polynomial_coefficients(f.child());
      if (!c) return std::nullopt;
      Coeffs out;
      for (const auto& row : *c) {
        std::vector<Complex> v(f.vector());
        for (auto& x : v) x *= row[0];
        out.push_back(std::move(v));
      }
      return out;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace bloch
