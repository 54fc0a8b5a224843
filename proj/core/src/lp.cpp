#include "catmeas/lp.hpp"

#include "catmeas/errors.hpp"

#include <limits>

namespace catmeas {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Tableau rows 0..m-1 are constraints, last column is the right-hand side.
// The objective row holds reduced costs; its rhs cell holds -value.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_(m + 1, n + 1), basis_(m, kNone) {}

  Rational& at(std::size_t r, std::size_t c) { return t_(r, c); }
  Rational& rhs(std::size_t r) { return t_(r, n_); }
  Rational& obj(std::size_t c) { return t_(m_, c); }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = Rational(1) / t_(row, col);
    for (std::size_t j = 0; j <= n_; ++j) t_(row, j) *= inv;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == row || t_(r, col) == 0) continue;
      const Rational f = t_(r, col);
      for (std::size_t j = 0; j <= n_; ++j)
        if (t_(row, j) != 0) t_(r, j) -= f * t_(row, j);
    }
    basis_[row] = col;
  }

  // Runs simplex iterations restricted to columns < allowed. Returns false if unbounded.
  bool optimize(std::size_t allowed) {
    for (;;) {
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (t_(m_, j) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == kNone) return true;
      std::size_t leave = kNone;
      Rational best;
      for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] == kNone || t_(r, enter) <= 0) continue;
        const Rational ratio = t_(r, n_) / t_(r, enter);
        if (leave == kNone || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == kNone) return false;
      pivot(leave, enter);
    }
  }

  void set_objective(const Vec& cost) {
    for (std::size_t j = 0; j <= n_; ++j) t_(m_, j) = 0;
    for (std::size_t j = 0; j < cost.size(); ++j) t_(m_, j) = cost[j];
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t b = basis_[r];
      if (b == kNone || t_(m_, b) == 0) continue;
      const Rational f = t_(m_, b);
      for (std::size_t j = 0; j <= n_; ++j) t_(m_, j) -= f * t_(r, j);
    }
  }

  std::size_t rows() const { return m_; }

 private:
  std::size_t m_, n_;
  Matrix t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& program) {
  const Matrix& a = program.equality;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (program.rhs.size() != m || program.cost.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "linear program dimensions");
  }

  // Columns: n structural, then m artificials.
  Tableau tab(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = program.rhs[r] < 0;
    for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = flip ? Rational(-a(r, j)) : a(r, j);
    tab.rhs(r) = flip ? Rational(-program.rhs[r]) : program.rhs[r];
    tab.at(r, n + r) = 1;
    tab.basis()[r] = n + r;
  }

  Vec phase_one(n + m);
  for (std::size_t r = 0; r < m; ++r) phase_one[n + r] = 1;
  tab.set_objective(phase_one);
  tab.optimize(n + m);

  LpResult result;
  if (tab.obj(n + m) != 0) {  // -(sum of artificials) != 0
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive artificial variables out of the basis; rows that cannot be pivoted are redundant.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) continue;
    std::size_t col = kNone;
    for (std::size_t j = 0; j < n; ++j) {
      if (tab.at(r, j) != 0) {
        col = j;
        break;
      }
    }
    if (col != kNone) {
      tab.pivot(r, col);
    } else {
      tab.basis()[r] = kNone;
    }
  }

  Vec cost(n + m);
  for (std::size_t j = 0; j < n; ++j) cost[j] = program.cost[j];
  tab.set_objective(cost);
  if (!tab.optimize(n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.solution.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = tab.basis()[r];
    if (b != kNone && b < n) result.solution[b] = tab.rhs(r);
  }
  result.value = 0;
  for (std::size_t j = 0; j < n; ++j) result.value += program.cost[j] * result.solution[j];
  return result;
}

}  // namespace catmeas
