#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "bloch/bloch_norms.hpp"
#include "bloch/holo_expr.hpp"

namespace bloch {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SampleEntry {
  Complex lambda{0.0, 0.0};
  DiscPoint z{};
};

/// The (lambda_i, z_i) data of a summing inequality; at least one entry.
class WeightedSample {
public:
  explicit WeightedSample(std::vector<SampleEntry> entries);
  /// lambda_i = 1 at every point.
  static WeightedSample uniform(const std::vector<DiscPoint>& points);

  const std::vector<SampleEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::vector<DiscPoint> points() const;

private:
  std::vector<SampleEntry> entries_;
};

/// (sum_i a_i^p)^(1/p), or max_i a_i for p = inf.
double lp_combine(std::span<const double> a, double p);

/// |g_k'(z_j)| for every point j (rows) and member k (columns).
std::vector<std::vector<double>> member_derivative_moduli(const TestFamily& family,
                                                          const std::vector<DiscPoint>& points);

struct Denominator {
  double family_value = 0.0;
  double closed_form_value = 0.0;
  std::size_t member = 0;  // attaining family member, smallest index on ties
};

Denominator denominator(const WeightedSample& sample, const TestFamily& family, double p);

struct SummingEstimate {
  double p = 2.0;
  double numerator = 0.0;
  double denominator_family = 0.0;
  double denominator_closed_form = 0.0;
  /// numerator / closed-form denominator: a true lower bound on the p-summing norm.
  double certified_lower = 0.0;
  /// numerator / family denominator: a heuristic estimate, never below certified_lower.
  double heuristic_ratio = 0.0;
  std::size_t denominator_member = 0;
  std::size_t numerator_entry = 0;  // largest |lambda_i| ||f'(z_i)||
};

SummingEstimate summing_estimate(const HoloExpr& f, const WeightedSample& sample, const TestFamily& family,
                                 double p, NormKind norm = NormKind::euclidean);

/// Probability weights on a family together with a domination constant.
struct PietschMeasure {
  std::shared_ptr<const TestFamily> family;
  std::vector<double> weights;
  double constant = 0.0;
  double p = 2.0;
  /// Unnormalized LP optimum sum_k w_k (= constant^p).
  double lp_value = 0.0;
  std::size_t pivots = 0;
};

/// Solves min sum w s.t. sum_k w_k a_jk^p >= rhs_j^p, w >= 0, where a_jk are
/// member derivative moduli at the points. This is the shared core of the
/// Pietsch and Maurey computations.
PietschMeasure solve_domination_lp(const std::vector<double>& rhs, const std::vector<std::vector<double>>& moduli,
                                   const TestFamily& family, double p);

PietschMeasure pietsch_lp(const HoloExpr& f, const std::vector<DiscPoint>& points, const TestFamily& family,
                          double p, NormKind norm = NormKind::euclidean);

struct DualityReport {
  double primal_value = 0.0;  // constant^p from the primal LP
  double dual_value = 0.0;    // max sum_j u_j ||f'(z_j)||^p
  double relative_gap = 0.0;
  double constant = 0.0;
  std::vector<double> dual_weights;    // u_j
  WeightedSample witness{{SampleEntry{}}};  // lambda_j = u_j^(1/p)
  double witness_ratio = 0.0;          // summing ratio of the witness against the family
  double witness_ratio_gap = 0.0;      // |witness_ratio - constant| / constant
  bool pass = false;
};

DualityReport lp_duality_check(const HoloExpr& f, const std::vector<DiscPoint>& points, const TestFamily& family,
                               double p, NormKind norm = NormKind::euclidean, double tol = 1e-7);

struct DominationEntry {
  DiscPoint z{};
  double lhs = 0.0;  // ||f'(z)||
  double rhs = 0.0;  // c (sum_k mu_k |g_k'(z)|^p)^(1/p)
  double margin = 0.0;
};

struct DominationReport {
  std::vector<DominationEntry> entries;
  double worst_margin = kInfinity;
  std::size_t violations = 0;
};

DominationReport domination_check(const HoloExpr& f, const std::vector<DiscPoint>& zs, const PietschMeasure& measure,
                                  NormKind norm = NormKind::euclidean, double tol = 1e-9);

struct FactorizationCertificate {
  std::vector<DiscPoint> points;
  PietschMeasure measure;
  std::vector<std::size_t> active_members;  // family indices with positive weight
  /// d x m matrix acting on raw function values (g_k'(z))_{k active}.
  std::vector<std::vector<Complex>> operator_matrix;
  double residual = 0.0;
  double operator_norm_estimate = 0.0;
};

struct FactorizeOptions {
  NormKind norm = NormKind::euclidean;
  int iterations = 200;
  int restarts = 10;
  std::uint64_t seed = 0;
  double residual_tol = 1e-8;
};

/// Least-squares operator T with T v_j = f'(z_j) on the L_p(mu) span of
/// v_j = (g_k'(z_j))_k, and an ascent estimate of its norm on that span.
/// Throws RankDeficiency when the residual exceeds options.residual_tol.
FactorizationCertificate factorize(const HoloExpr& f, const std::vector<DiscPoint>& points,
                                   const PietschMeasure& measure, const FactorizeOptions& options = {});

/// Ratio ||T u|| / ||u||_{L_p(mu)} for u = sum_j alpha_j v_j.
double factorization_ratio(const FactorizationCertificate& cert, std::span<const Complex> alpha, NormKind norm);

struct MaureyStage {
  std::vector<double> weights;
  double constant = 0.0;
  /// min over points of ||v||_1^theta ||v||_q^(1-theta) - ||v||_p
  double worst_interpolation_margin = kInfinity;
  /// min over points of (int|v|)^theta (int|v|^q)^(1-theta) - int|v|^p
  double worst_holder_margin = kInfinity;
  double worst_domination_margin = kInfinity;  // stage LP constraint, n >= 1
};

struct MaureyReport {
  double p = 2.0;
  double q = 4.0;
  int depth = 1;
  double theta = 0.0;
  double theta_consistency = 0.0;  // |theta + (1 - theta) q - p|
  double initial_constant = 0.0;   // c_0 from the exponent-q Pietsch LP of f
  double c_max = 0.0;              // max over extrapolation stages 1..depth
  double big_c = 0.0;              // 2 (2 c_max)^(1/theta)
  double truncation_mass = 0.0;    // 2^-(depth+1), removed before renormalizing
  double truncation_remainder = 0.0;
  std::vector<MaureyStage> stages;  // mu_0 .. mu_depth
  std::vector<double> mixture;      // renormalized geometric mixture
  double worst_interpolation_margin = kInfinity;
  double worst_holder_margin = kInfinity;
  double worst_final_margin = kInfinity;     // C ||v||_{L1(mix)} - ||v||_{Lq(mu_0)}
  double worst_function_margin = kInfinity;  // c_0 C ||v||_{L1(mix)} - ||f'||
};

MaureyReport maurey_extrapolate(const HoloExpr& f, const std::vector<DiscPoint>& points, const TestFamily& family,
                                double p, double q, int depth, NormKind norm = NormKind::euclidean);

/// theta in (0, 1) with p = theta + (1 - theta) q.
double maurey_theta(double p, double q);

}  // namespace bloch
