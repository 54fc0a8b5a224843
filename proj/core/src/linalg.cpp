#include "catmeas/linalg.hpp"

#include "catmeas/errors.hpp"

#include <utility>

namespace catmeas {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorCode::ShapeMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error(ErrorCode::ShapeMismatch, "ragged matrix columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Matrix Matrix::diagonal(const Vec& entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Vec Matrix::row(std::size_t r) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vec Matrix::column(std::size_t c) const {
  Vec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(ErrorCode::ShapeMismatch, "matrix product shape");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        if (rhs(k, j) != 0) out(i, j) += a * rhs(k, j);
      }
    }
  }
  return out;
}

Vec Matrix::operator*(const Vec& v) const {
  if (cols_ != v.size()) throw Error(ErrorCode::ShapeMismatch, "matrix-vector shape");
  Vec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if ((*this)(i, k) != 0 && v[k] != 0) out[i] += (*this)(i, k) * v[k];
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(ErrorCode::ShapeMismatch, "matrix sum shape");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(ErrorCode::ShapeMismatch, "matrix difference shape");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

Matrix Matrix::scaled(const Rational& k) const {
  Matrix out = *this;
  for (auto& x : out.data_) x *= k;
  return out;
}

Matrix Matrix::kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows_ * b.rows_, a.cols_ * b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t k = 0; k < b.rows_; ++k)
        for (std::size_t l = 0; l < b.cols_; ++l) out(i * b.rows_ + k, j * b.cols_ + l) = a(i, j) * b(k, l);
    }
  return out;
}

Matrix Matrix::block_diagonal(const std::vector<Matrix>& blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows_;
    cols += b.cols_;
  }
  Matrix out(rows, cols);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) out(r0 + i, c0 + j) = b(i, j);
    r0 += b.rows_;
    c0 += b.cols_;
  }
  return out;
}

Matrix Matrix::hstack(const std::vector<Matrix>& blocks, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows_ != rows) throw Error(ErrorCode::ShapeMismatch, "hstack row count");
    cols += b.cols_;
  }
  Matrix out(rows, cols);
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, c0 + j) = b(i, j);
    c0 += b.cols_;
  }
  return out;
}

Matrix Matrix::vstack(const std::vector<Matrix>& blocks, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols_ != cols) throw Error(ErrorCode::ShapeMismatch, "vstack column count");
    rows += b.rows_;
  }
  Matrix out(rows, cols);
  std::size_t r0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < cols; ++j) out(r0 + i, j) = b(i, j);
    r0 += b.rows_;
  }
  return out;
}

Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "vector sum length");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "vector difference length");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec scaled(const Vec& v, const Rational& k) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * k;
  return out;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

RowEchelon rref(Matrix m) {
  RowEchelon out;
  std::size_t lead_row = 0;
  for (std::size_t col = 0; col < m.cols() && lead_row < m.rows(); ++col) {
    std::size_t pivot = lead_row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != lead_row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(lead_row, j));
    const Rational inv = Rational(1) / m(lead_row, col);
    // Constraint systems are sparse; only the pivot row's nonzeros matter.
    std::vector<std::size_t> support;
    for (std::size_t j = col; j < m.cols(); ++j) {
      if (m(lead_row, j) == 0) continue;
      m(lead_row, j) *= inv;
      support.push_back(j);
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || m(r, col) == 0) continue;
      const Rational factor = m(r, col);
      for (auto j : support) m(r, j) -= factor * m(lead_row, j);
    }
    out.pivots.push_back(col);
    ++lead_row;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

Matrix nullspace(const Matrix& m) {
  const RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return Matrix::from_columns(basis, m.cols());
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  return solve_unique(m, Matrix::identity(m.rows()));
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "solve: row count");
  const std::size_t n = a.cols();
  const RowEchelon e = rref(Matrix::hstack({a, b}, a.rows()));
  Matrix x(n, b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    const std::size_t p = e.pivots[r];
    if (p >= n) return std::nullopt;  // pivot in the augmented block: inconsistent
    for (std::size_t j = 0; j < b.cols(); ++j) x(p, j) = e.reduced(r, n + j);
  }
  return x;
}

std::optional<Matrix> solve_unique(const Matrix& a, const Matrix& b) {
  if (rank(a) != a.cols()) return std::nullopt;
  return solve(a, b);
}

}  // namespace catmeas
