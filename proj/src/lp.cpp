#include "bloch/lp.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "bloch/errors.hpp"

namespace bloch::lp {

namespace {

// Tableau layout: rows 0..m-1 are constraints, row m the phase-2 objective,
// row m+1 the phase-1 objective. Columns 0..n-1 are the nonbasic variables,
// column n the phase-1 artificial slot, column n+1 the right-hand side.
// Variable ids: 0..n-1 structural, n..n+m-1 slacks, -1 the artificial.
class Tableau {
public:
  Tableau(const Matrix& A, const std::vector<double>& b, const std::vector<double>& c, double eps)
      : m_(b.size()), n_(c.size()), eps_(eps), nonbasic_(n_ + 1), basic_(m_), d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (A[i].size() != n_) throw InvalidArgument("lp: constraint row has the wrong length");
      for (std::size_t j = 0; j < n_; ++j) d_[i][j] = A[i][j];
      basic_[i] = static_cast<long>(n_ + i);
      d_[i][n_] = -1.0;
      d_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasic_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  Result solve() {
    Result res;
    if (m_ > 0) {
      std::size_t r = 0;
      for (std::size_t i = 1; i < m_; ++i) {
        if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
      }
      if (d_[r][n_ + 1] < -eps_) {
        pivot(r, n_);
        if (!run(2) || d_[m_ + 1][n_ + 1] < -eps_) {
          res.status = Status::infeasible;
          res.pivots = pivots_;
          return res;
        }
        // Drive the artificial variable out of the basis if it stayed at zero.
        for (std::size_t i = 0; i < m_; ++i) {
          if (basic_[i] != -1) continue;
          std::size_t s = 0;
          bool found = false;
          for (std::size_t j = 0; j <= n_; ++j) {
            if (nonbasic_[j] == -1 || std::abs(d_[i][j]) <= eps_) continue;
            if (!found || nonbasic_[j] < nonbasic_[s]) {
              s = j;
              found = true;
            }
          }
          if (found) pivot(i, s);
        }
      }
    }
    const bool bounded = run(1);
    res.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) res.x[basic_[i]] = d_[i][n_ + 1];
    }
    res.status = bounded ? Status::optimal : Status::unbounded;
    res.value = bounded ? d_[m_][n_ + 1] : std::numeric_limits<double>::infinity();
    res.pivots = pivots_;
    return res;
  }

private:
  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / d_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(d_[i][s]) <= 0.0) continue;
      const double f = d_[i][s] * inv;
      for (std::size_t j = 0; j < n_ + 2; ++j) d_[i][j] -= d_[r][j] * f;
      d_[i][s] = d_[r][s] * f;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j) {
      if (j != s) d_[r][j] *= inv;
    }
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i != r) d_[i][s] *= -inv;
    }
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
    ++pivots_;
  }

  // phase 1 optimizes row m_+1 and may move the artificial; phase 2 keeps it out.
  bool run(int phase) {
    const std::size_t obj = phase == 2 ? m_ + 1 : m_;
    const std::size_t limit = 50000;
    for (std::size_t iter = 0; iter < limit; ++iter) {
      long best_id = std::numeric_limits<long>::max();
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (phase == 1 && nonbasic_[j] == -1) continue;
        if (d_[obj][j] < -eps_ && nonbasic_[j] < best_id) {
          best_id = nonbasic_[j];
          s = j;
        }
      }
      if (s == n_ + 1) return true;
      std::size_t r = m_;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (d_[i][s] <= eps_) continue;
        const double ratio = d_[i][n_ + 1] / d_[i][s];
        if (r == m_ || ratio < best_ratio - eps_ ||
            (std::abs(ratio - best_ratio) <= eps_ && basic_[i] < basic_[r])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r == m_) return false;
      pivot(r, s);
    }
    throw Error("LpIterationLimit", "lp: simplex iteration limit reached");
  }

  std::size_t m_;
  std::size_t n_;
  double eps_;
  std::vector<long> nonbasic_;
  std::vector<long> basic_;
  Matrix d_;
  std::size_t pivots_ = 0;
};

}  // namespace

Result maximize(const Matrix& A, const std::vector<double>& b, const std::vector<double>& c, double eps) {
  if (A.size() != b.size()) throw InvalidArgument("lp: A and b disagree on the number of rows");
  Tableau t(A, b, c, eps);
  return t.solve();
}

}  // namespace bloch::lp
