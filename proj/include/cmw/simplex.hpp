#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "cmw/errors.hpp"
#include "cmw/scalar.hpp"

namespace cmw {

enum class RowSense { LessEqual, GreaterEqual, Equal };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// maximize c^T x subject to row constraints and x >= 0.
template <class T>
struct LinearProgram {
  std::vector<std::vector<T>> rows;
  std::vector<RowSense> sense;
  std::vector<T> rhs;
  std::vector<T> objective;

  void add_row(std::vector<T> a, RowSense s, T b) {
    rows.push_back(std::move(a));
    sense.push_back(s);
    rhs.push_back(std::move(b));
  }
};

template <class T>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  T value{0};
  std::vector<T> x;
};

template <class T>
T default_lp_epsilon() {
  if constexpr (is_exact_v<T>) {
    return T(0);
  } else {
    return 1e-11;
  }
}

// Dictionary simplex with an auxiliary variable for infeasible starts. Pivoting follows the largest
// reduced cost and switches permanently to Bland's rule after a run of degenerate pivots, so runs
// are deterministic and terminate.
template <class T>
class SimplexSolver {
 public:
  SimplexSolver(const std::vector<std::vector<T>>& A, const std::vector<T>& b, const std::vector<T>& c, T eps)
      : m_(b.size()), n_(c.size()), eps_(eps), N_(n_ + 1), B_(m_), D_(m_ + 2, std::vector<T>(n_ + 2, T(0))) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (A[i].size() != n_) throw PreconditionError("constraint row has wrong length");
      for (std::size_t j = 0; j < n_; ++j) D_[i][j] = A[i][j];
      B_[i] = static_cast<long>(n_ + i);
      D_[i][n_] = T(-1);
      D_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      N_[j] = static_cast<long>(j);
      D_[m_][j] = -c[j];
    }
    N_[n_] = -1;
    D_[m_ + 1][n_] = T(1);
  }

  LpResult<T> solve() {
    LpResult<T> res;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
    if (m_ > 0 && D_[r][n_ + 1] < -eps_) {
      pivot(r, n_);
      if (!run(2) || D_[m_ + 1][n_ + 1] < -eps_) return res;  // infeasible
      for (std::size_t i = 0; i < m_; ++i) {
        if (B_[i] != -1) continue;
        std::size_t s = 0;
        for (std::size_t j = 1; j <= n_; ++j)
          if (better_entering(i, j, s)) s = j;
        pivot(i, s);
      }
    }
    const bool bounded = run(1);
    res.x.assign(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (B_[i] >= 0 && static_cast<std::size_t>(B_[i]) < n_) res.x[B_[i]] = D_[i][n_ + 1];
    if (!bounded) {
      res.status = LpStatus::Unbounded;
      return res;
    }
    res.status = LpStatus::Optimal;
    res.value = D_[m_][n_ + 1];
    return res;
  }

 private:
  bool better_entering(std::size_t row, std::size_t j, std::size_t s) const {
    if (D_[row][j] < D_[row][s]) return true;
    return D_[row][j] == D_[row][s] && N_[j] < N_[s];
  }

  void pivot(std::size_t r, std::size_t s) {
    const T inv = T(1) / D_[r][s];
    const std::vector<T>& prow = D_[r];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || D_[i][s] == T(0)) continue;
      std::vector<T>& row = D_[i];
      const T f = row[s] * inv;
      const T keep = row[s];
      for (std::size_t j = 0; j < n_ + 2; ++j)
        if (prow[j] != T(0)) row[j] -= prow[j] * f;
      row[s] = keep;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j)
      if (j != s) D_[r][j] *= inv;
    for (std::size_t i = 0; i < m_ + 2; ++i)
      if (i != r) D_[i][s] *= -inv;
    D_[r][s] = inv;
    std::swap(B_[r], N_[s]);
  }

  bool run(int phase) {
    const std::size_t x = m_ + static_cast<std::size_t>(phase) - 1;
    bool bland = false;
    int degenerate_run = 0;
    for (;;) {
      long s = -1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (N_[j] == -phase) continue;
        if (bland) {
          if (D_[x][j] < -eps_ && (s == -1 || N_[j] < N_[s])) s = static_cast<long>(j);
        } else if (s == -1 || D_[x][j] < D_[x][s] || (D_[x][j] == D_[x][s] && N_[j] < N_[s])) {
          s = static_cast<long>(j);
        }
      }
      if (s == -1 || D_[x][s] >= -eps_) return true;
      long r = -1;
      for (std::size_t i = 0; i < m_; ++i) {
        if (D_[i][s] <= eps_) continue;
        if (r == -1) {
          r = static_cast<long>(i);
          continue;
        }
        const T lhs = D_[i][n_ + 1] * D_[r][s];
        const T rhs = D_[r][n_ + 1] * D_[i][s];
        if (lhs < rhs || (lhs == rhs && B_[i] < B_[r])) r = static_cast<long>(i);
      }
      if (r == -1) return false;
      if (D_[r][n_ + 1] <= eps_) {
        if (++degenerate_run > 32) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
    }
  }

  std::size_t m_, n_;
  T eps_;
  std::vector<long> N_, B_;
  std::vector<std::vector<T>> D_;
};

template <class T>
LpResult<T> solve_lp(const LinearProgram<T>& lp, T eps = default_lp_epsilon<T>()) {
  std::vector<std::vector<T>> A;
  std::vector<T> b;
  const std::size_t n = lp.objective.size();
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.rows[i].size() != n) throw PreconditionError("constraint row has wrong length");
    if (lp.sense[i] != RowSense::GreaterEqual) {
      A.push_back(lp.rows[i]);
      b.push_back(lp.rhs[i]);
    }
    if (lp.sense[i] != RowSense::LessEqual) {
      std::vector<T> neg = lp.rows[i];
      for (T& v : neg) v = -v;
      A.push_back(std::move(neg));
      b.push_back(-lp.rhs[i]);
    }
  }
  SimplexSolver<T> solver(A, b, lp.objective, eps);
  return solver.solve();
}

}  // namespace cmw
