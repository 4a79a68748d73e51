#pragma once

#include <cstddef>
#include <vector>

namespace bloch::lp {

using Matrix = std::vector<std::vector<double>>;

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  double value = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

/// maximize c'x subject to A x <= b, x >= 0, for any sign of b.
///
/// Dense two-phase tableau simplex with Bland's rule for both the entering
/// column (smallest variable index with a negative reduced cost) and the
/// leaving row (minimum ratio, ties to the smallest basic index), so pivoting
/// is deterministic and cannot cycle. Sized for instances with tens of rows
/// and columns.
Result maximize(const Matrix& A, const std::vector<double>& b, const std::vector<double>& c, double eps = 1e-9);

}  // namespace bloch::lp
