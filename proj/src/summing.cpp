#include "bloch/summing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bloch/errors.hpp"
#include "bloch/lp.hpp"

namespace bloch {

WeightedSample::WeightedSample(std::vector<SampleEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidArgument("weighted sample needs at least one entry");
}

WeightedSample WeightedSample::uniform(const std::vector<DiscPoint>& points) {
  std::vector<SampleEntry> e;
  for (const auto& z : points) e.push_back({Complex(1.0, 0.0), z});
  return WeightedSample(std::move(e));
}

std::vector<DiscPoint> WeightedSample::points() const {
  std::vector<DiscPoint> out;
  for (const auto& e : entries_) out.push_back(e.z);
  return out;
}

double lp_combine(std::span<const double> a, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : a) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : a) s += std::pow(v, p);
  return std::pow(s, 1.0 / p);
}

namespace {

void check_exponent(double p, bool allow_inf) {
  if (!(p >= 1.0) || (!allow_inf && std::isinf(p))) {
    std::ostringstream os;
    os << "exponent " << p << (allow_inf ? " must lie in [1, inf]" : " must lie in [1, inf)");
    throw InvalidArgument(os.str());
  }
}

std::vector<double> derivative_norms(const HoloExpr& f, const std::vector<DiscPoint>& points, NormKind norm) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& z : points) out.push_back(vector_norm(f.derivative_at(z.value()), norm));
  return out;
}

// (sum_k mu_k a_k^p)^(1/p)
double measure_norm(std::span<const double> mu, std::span<const double> a, double p) {
  double s = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mu[k] > 0.0) s += mu[k] * std::pow(a[k], p);
  }
  return std::pow(s, 1.0 / p);
}

}  // namespace

std::vector<std::vector<double>> member_derivative_moduli(const TestFamily& family,
                                                          const std::vector<DiscPoint>& points) {
  std::vector<std::vector<double>> out(points.size(), std::vector<double>(family.size(), 0.0));
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t k = 0; k < family.size(); ++k) {
      out[j][k] = std::abs(family[k].expr.scalar_derivative_at(points[j].value()));
    }
  }
  return out;
}

Denominator denominator(const WeightedSample& sample, const TestFamily& family, double p) {
  check_exponent(p, true);
  if (family.empty()) throw InvalidArgument("denominator needs a nonempty family");
  const auto& e = sample.entries();
  Denominator d;
  std::vector<double> terms(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) terms[i] = std::abs(e[i].lambda) / e[i].z.weight();
  d.closed_form_value = lp_combine(terms, p);

  d.family_value = -1.0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      terms[i] = std::abs(e[i].lambda) * std::abs(family[k].expr.scalar_derivative_at(e[i].z.value()));
    }
    const double v = lp_combine(terms, p);
    if (v > d.family_value) {
      d.family_value = v;
      d.member = k;
    }
  }
  return d;
}

SummingEstimate summing_estimate(const HoloExpr& f, const WeightedSample& sample, const TestFamily& family, double p,
                                 NormKind norm) {
  check_exponent(p, true);
  const auto& e = sample.entries();
  std::vector<double> terms(e.size());
  SummingEstimate s;
  s.p = p;
  for (std::size_t i = 0; i < e.size(); ++i) {
    terms[i] = std::abs(e[i].lambda) * vector_norm(f.derivative_at(e[i].z.value()), norm);
    if (terms[i] > terms[s.numerator_entry]) s.numerator_entry = i;
  }
  s.numerator = lp_combine(terms, p);
  const Denominator d = denominator(sample, family, p);
  s.denominator_family = d.family_value;
  s.denominator_closed_form = d.closed_form_value;
  s.denominator_member = d.member;
  s.certified_lower = s.denominator_closed_form > 0.0 ? s.numerator / s.denominator_closed_form : 0.0;
  if (s.denominator_family > 0.0) {
    s.heuristic_ratio = s.numerator / s.denominator_family;
  } else {
    s.heuristic_ratio = s.numerator > 0.0 ? kInfinity : 0.0;
  }
  return s;
}

PietschMeasure solve_domination_lp(const std::vector<double>& rhs, const std::vector<std::vector<double>>& moduli,
                                   const TestFamily& family, double p) {
  check_exponent(p, false);
  const std::size_t n = rhs.size();
  const std::size_t m = family.size();
  if (n == 0) throw InvalidArgument("domination LP needs at least one point");
  if (m == 0) throw InvalidArgument("domination LP needs a nonempty family");

  // Rows with positive right-hand side are scaled to read sum_k w_k A_jk / b_j >= 1.
  lp::Matrix A;
  std::vector<double> b;
  for (std::size_t j = 0; j < n; ++j) {
    const double bj = std::pow(rhs[j], p);
    double row_max = 0.0;
    for (std::size_t k = 0; k < m; ++k) row_max = std::max(row_max, std::pow(moduli[j][k], p));
    if (bj > 0.0 && row_max == 0.0) {
      std::ostringstream os;
      os << "point " << j << " has ||f'|| > 0 but every family derivative vanishes there";
      throw Infeasible(os.str());
    }
    const double scale = bj > 0.0 ? bj : (row_max > 0.0 ? row_max : 1.0);
    std::vector<double> row(m);
    for (std::size_t k = 0; k < m; ++k) row[k] = -std::pow(moduli[j][k], p) / scale;
    A.push_back(std::move(row));
    b.push_back(bj > 0.0 ? -1.0 : 0.0);
  }
  const std::vector<double> c(m, -1.0);
  const lp::Result r = lp::maximize(A, b, c);
  if (r.status == lp::Status::infeasible) throw Infeasible("domination LP is infeasible");
  if (r.status == lp::Status::unbounded) throw Unbounded("domination LP is unbounded");

  PietschMeasure mu;
  mu.p = p;
  mu.family = std::make_shared<const TestFamily>(family);
  mu.pivots = r.pivots;
  std::vector<double> w = r.x;
  double total = 0.0;
  for (auto& v : w) {
    if (v < 0.0) v = 0.0;
    total += v;
  }
  mu.lp_value = total;
  mu.constant = std::pow(total, 1.0 / p);
  if (total > 0.0) {
    for (auto& v : w) v /= total;
  } else {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(m));
  }
  mu.weights = std::move(w);
  return mu;
}

PietschMeasure pietsch_lp(const HoloExpr& f, const std::vector<DiscPoint>& points, const TestFamily& family, double p,
                          NormKind norm) {
  check_exponent(p, false);
  return solve_domination_lp(derivative_norms(f, points, norm), member_derivative_moduli(family, points), family, p);
}

DualityReport lp_duality_check(const HoloExpr& f, const std::vector<DiscPoint>& points, const TestFamily& family,
                               double p, NormKind norm, double tol) {
  const PietschMeasure primal = pietsch_lp(f, points, family, p, norm);
  const auto fn = derivative_norms(f, points, norm);
  const auto moduli = member_derivative_moduli(family, points);
  const std::size_t n = points.size();
  const std::size_t m = family.size();

  // maximize sum_j u_j ||f'(z_j)||^p  s.t.  sum_j u_j |g_k'(z_j)|^p <= 1 for every k.
  lp::Matrix A(m, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < n; ++j) A[k][j] = std::pow(moduli[j][k], p);
  }
  std::vector<double> obj(n);
  for (std::size_t j = 0; j < n; ++j) obj[j] = std::pow(fn[j], p);
  const lp::Result r = lp::maximize(A, std::vector<double>(m, 1.0), obj);
  if (r.status != lp::Status::optimal) throw Infeasible("dual summing LP has no finite optimum");

  DualityReport rep;
  rep.primal_value = primal.lp_value;
  rep.dual_value = r.value;
  rep.constant = primal.constant;
  rep.relative_gap = rep.primal_value > 0.0 ? std::abs(rep.primal_value - rep.dual_value) / rep.primal_value
                                            : std::abs(rep.dual_value);
  rep.dual_weights = r.x;
  std::vector<SampleEntry> entries;
  for (std::size_t j = 0; j < n; ++j) {
    entries.push_back({Complex(std::pow(std::max(0.0, r.x[j]), 1.0 / p), 0.0), points[j]});
  }
  rep.witness = WeightedSample(std::move(entries));
  const SummingEstimate s = summing_estimate(f, rep.witness, family, p, norm);
  rep.witness_ratio = s.denominator_family > 0.0 ? s.heuristic_ratio : 0.0;
  rep.witness_ratio_gap = rep.constant > 0.0 ? std::abs(rep.witness_ratio - rep.constant) / rep.constant
                                             : std::abs(rep.witness_ratio);
  rep.pass = rep.relative_gap <= tol && rep.witness_ratio_gap <= tol;
  return rep;
}

DominationReport domination_check(const HoloExpr& f, const std::vector<DiscPoint>& zs, const PietschMeasure& measure,
                                  NormKind norm, double tol) {
  if (!measure.family) throw InvalidArgument("measure carries no family");
  const auto moduli = member_derivative_moduli(*measure.family, zs);
  DominationReport rep;
  for (std::size_t j = 0; j < zs.size(); ++j) {
    DominationEntry e;
    e.z = zs[j];
    e.lhs = vector_norm(f.derivative_at(zs[j].value()), norm);
    e.rhs = measure.constant * measure_norm(measure.weights, moduli[j], measure.p);
    e.margin = e.rhs - e.lhs;
    rep.worst_margin = std::min(rep.worst_margin, e.margin);
    if (e.margin < -tol) ++rep.violations;
    rep.entries.push_back(e);
  }
  return rep;
}

namespace {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

double eigen_norm(const CVector& y, NormKind norm) {
  return vector_norm(std::span<const Complex>(y.data(), static_cast<std::size_t>(y.size())), norm);
}

struct AscentProblem {
  CMatrix image;     // d x n: alpha -> T u(alpha)
  CMatrix weighted;  // m x n: alpha -> mu^(1/p) u(alpha)
  double p;
  NormKind norm;

  double ratio(const CVector& alpha) const {
    const CVector w = weighted * alpha;
    double s = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) s += std::pow(std::abs(w[k]), p);
    const double den = std::pow(s, 1.0 / p);
    if (!(den > 0.0)) return 0.0;
    return eigen_norm(image * alpha, norm) / den;
  }

  // Ascent direction for log ratio in the conjugate (Wirtinger) coordinates.
  CVector gradient(const CVector& alpha) const {
    const CVector y = image * alpha;
    const CVector w = weighted * alpha;
    CVector top = CVector::Zero(alpha.size());
    if (norm == NormKind::sup) {
      Eigen::Index best = 0;
      for (Eigen::Index i = 1; i < y.size(); ++i) {
        if (std::abs(y[i]) > std::abs(y[best])) best = i;
      }
      const double a = std::abs(y[best]);
      if (a > 0.0) top = image.row(best).adjoint() * (y[best] / (a * a));
    } else {
      const double n2 = y.squaredNorm();
      if (n2 > 0.0) top = image.adjoint() * y / n2;
    }
    CVector pw(w.size());
    double s = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      const double a = std::abs(w[k]);
      s += std::pow(a, p);
      pw[k] = a > 0.0 ? std::pow(a, p - 2.0) * w[k] : Complex(0.0, 0.0);
    }
    CVector bottom = CVector::Zero(alpha.size());
    if (s > 0.0) bottom = weighted.adjoint() * pw / s;
    return top - bottom;
  }
};

double ascend(const AscentProblem& prob, CVector alpha, int iterations) {
  alpha.normalize();
  double best = prob.ratio(alpha);
  double step = 0.5;
  for (int it = 0; it < iterations && step > 1e-14; ++it) {
    const CVector g = prob.gradient(alpha);
    const double gn = g.norm();
    if (!(gn > 0.0)) break;
    CVector trial = alpha + (step / gn) * g;
    trial.normalize();
    const double r = prob.ratio(trial);
    if (r > best) {
      best = r;
      alpha = trial;
      step = std::min(step * 1.5, 1.0);
    } else {
      step *= 0.5;
    }
  }
  return best;
}

}  // namespace

double factorization_ratio(const FactorizationCertificate& cert, std::span<const Complex> alpha, NormKind norm) {
  const auto& family = *cert.measure.family;
  const std::size_t m = cert.active_members.size();
  std::vector<Complex> u(m, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < cert.points.size(); ++j) {
    for (std::size_t a = 0; a < m; ++a) {
      u[a] += alpha[j] * family[cert.active_members[a]].expr.scalar_derivative_at(cert.points[j].value());
    }
  }
  const std::size_t d = cert.operator_matrix.size();
  std::vector<Complex> y(d, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t a = 0; a < m; ++a) y[i] += cert.operator_matrix[i][a] * u[a];
  }
  double s = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    s += cert.measure.weights[cert.active_members[a]] * std::pow(std::abs(u[a]), cert.measure.p);
  }
  const double den = std::pow(s, 1.0 / cert.measure.p);
  return den > 0.0 ? vector_norm(y, norm) / den : 0.0;
}

FactorizationCertificate factorize(const HoloExpr& f, const std::vector<DiscPoint>& points,
                                   const PietschMeasure& measure, const FactorizeOptions& options) {
  if (!measure.family) throw InvalidArgument("measure carries no family");
  if (points.empty()) throw InvalidArgument("factorization needs at least one point");
  const auto& family = *measure.family;
  const double p = measure.p;

  FactorizationCertificate cert;
  cert.points = points;
  cert.measure = measure;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (measure.weights[k] > 0.0) cert.active_members.push_back(k);
  }
  const auto m = static_cast<Eigen::Index>(cert.active_members.size());
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto d = static_cast<Eigen::Index>(f.dimension());

  CMatrix raw(m, n);       // v_j as columns
  CMatrix weighted(m, n);  // mu^(1/p) v_j
  CMatrix images(d, n);    // f'(z_j)
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex z = points[j].value();
    for (Eigen::Index a = 0; a < m; ++a) {
      const std::size_t k = cert.active_members[a];
      raw(a, j) = family[k].expr.scalar_derivative_at(z);
      weighted(a, j) = std::pow(measure.weights[k], 1.0 / p) * raw(a, j);
    }
    const auto fd = f.derivative_at(z);
    for (Eigen::Index i = 0; i < d; ++i) images(i, j) = fd[i];
  }

  // Minimum-norm solution of T_w * weighted = images, solved as weighted^H T_w^H = images^H.
  const CMatrix lhs = weighted.adjoint();
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(lhs);
  const CMatrix tw = cod.solve(CMatrix(images.adjoint())).adjoint();  // d x m

  // Raw-coordinate operator: T = T_w * diag(mu^(1/p)).
  CMatrix t = tw;
  for (Eigen::Index a = 0; a < m; ++a) t.col(a) *= std::pow(measure.weights[cert.active_members[a]], 1.0 / p);
  cert.operator_matrix.assign(static_cast<std::size_t>(d), std::vector<Complex>(static_cast<std::size_t>(m)));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index a = 0; a < m; ++a) cert.operator_matrix[i][a] = t(i, a);
  }

  const CMatrix fitted = t * raw;
  for (Eigen::Index j = 0; j < n; ++j) {
    cert.residual = std::max(cert.residual, eigen_norm(fitted.col(j) - images.col(j), options.norm));
  }
  if (cert.residual > options.residual_tol) {
    std::ostringstream os;
    os << "factorization residual " << cert.residual << " exceeds " << options.residual_tol
       << ": derivative vectors are dependent on the measure support and the images are inconsistent";
    throw RankDeficiency(os.str());
  }

  // Ascend over an orthonormal basis q of the span of mu^(1/p) u(alpha); the
  // alpha coordinates are badly conditioned when derivative columns nearly coincide.
  Eigen::JacobiSVD<CMatrix> span(weighted, Eigen::ComputeThinU);
  const Eigen::Index r = std::max<Eigen::Index>(span.rank(), 1);
  const CMatrix q = span.matrixU().leftCols(r);
  const CMatrix image = tw * q;
  AscentProblem prob{image, q, p, options.norm};
  Eigen::JacobiSVD<CMatrix> top(image, Eigen::ComputeThinV);
  cert.operator_norm_estimate = ascend(prob, top.matrixV().col(0), options.iterations);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < options.restarts; ++k) {
    CVector c(r);
    for (Eigen::Index j = 0; j < r; ++j) c[j] = Complex(gauss(rng), gauss(rng));
    cert.operator_norm_estimate = std::max(cert.operator_norm_estimate, ascend(prob, c, options.iterations));
  }
  return cert;
}

double maurey_theta(double p, double q) {
  if (!(1.0 < p && p < q && std::isfinite(q))) throw InvalidArgument("maurey extrapolation needs 1 < p < q < inf");
  return (q - p) / (q - 1.0);
}

MaureyReport maurey_extrapolate(const HoloExpr& f, const std::vector<DiscPoint>& points, const TestFamily& family,
                                double p, double q, int depth, NormKind norm) {
  if (depth < 1) throw InvalidArgument("maurey depth must be >= 1");
  MaureyReport rep;
  rep.p = p;
  rep.q = q;
  rep.depth = depth;
  rep.theta = maurey_theta(p, q);
  rep.theta_consistency = std::abs(rep.theta + (1.0 - rep.theta) * q - p);

  const auto moduli = member_derivative_moduli(family, points);
  const std::size_t n = points.size();
  const std::size_t m = family.size();

  const PietschMeasure mu0 = pietsch_lp(f, points, family, q, norm);
  rep.initial_constant = mu0.constant;
  rep.stages.push_back(MaureyStage{mu0.weights, mu0.constant});

  for (int s = 0; s < depth; ++s) {
    const auto& prev = rep.stages.back().weights;
    std::vector<double> rhs(n);
    for (std::size_t j = 0; j < n; ++j) rhs[j] = measure_norm(prev, moduli[j], q);
    const PietschMeasure next = solve_domination_lp(rhs, moduli, family, p);
    MaureyStage stage{next.weights, next.constant};
    for (std::size_t j = 0; j < n; ++j) {
      const double margin = next.constant * measure_norm(next.weights, moduli[j], p) - rhs[j];
      stage.worst_domination_margin = std::min(stage.worst_domination_margin, margin);
    }
    rep.c_max = std::max(rep.c_max, next.constant);
    rep.stages.push_back(std::move(stage));
  }

  for (auto& stage : rep.stages) {
    for (std::size_t j = 0; j < n; ++j) {
      const double lp_norm = measure_norm(stage.weights, moduli[j], p);
      const double l1 = measure_norm(stage.weights, moduli[j], 1.0);
      const double lq = measure_norm(stage.weights, moduli[j], q);
      const double margin = std::pow(l1, rep.theta) * std::pow(lq, 1.0 - rep.theta) - lp_norm;
      stage.worst_interpolation_margin = std::min(stage.worst_interpolation_margin, margin);
      const double holder = std::pow(l1, rep.theta) * std::pow(std::pow(lq, q), 1.0 - rep.theta) - std::pow(lp_norm, p);
      stage.worst_holder_margin = std::min(stage.worst_holder_margin, holder);
    }
    rep.worst_interpolation_margin = std::min(rep.worst_interpolation_margin, stage.worst_interpolation_margin);
    rep.worst_holder_margin = std::min(rep.worst_holder_margin, stage.worst_holder_margin);
  }

  rep.mixture.assign(m, 0.0);
  double mass = 0.0;
  for (std::size_t s = 0; s < rep.stages.size(); ++s) {
    const double w = std::ldexp(1.0, -static_cast<int>(s) - 1);
    mass += w;
    for (std::size_t k = 0; k < m; ++k) rep.mixture[k] += w * rep.stages[s].weights[k];
  }
  for (auto& v : rep.mixture) v /= mass;
  rep.truncation_mass = 1.0 - mass;

  rep.big_c = 2.0 * std::pow(2.0 * rep.c_max, 1.0 / rep.theta);
  const auto fn = derivative_norms(f, points, norm);
  for (std::size_t j = 0; j < n; ++j) {
    const double lq0 = measure_norm(rep.stages.front().weights, moduli[j], q);
    const double l1mix = measure_norm(rep.mixture, moduli[j], 1.0);
    rep.worst_final_margin = std::min(rep.worst_final_margin, rep.big_c * l1mix - lq0);
    rep.worst_function_margin = std::min(rep.worst_function_margin, rep.initial_constant * rep.big_c * l1mix - fn[j]);
    rep.truncation_remainder =
        std::max(rep.truncation_remainder,
                 rep.truncation_mass * measure_norm(rep.stages.back().weights, moduli[j], q));
  }
  return rep;
}

}  // namespace bloch
