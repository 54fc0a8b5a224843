#pragma once

#include "catmeas/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace catmeas {

using Vec = std::vector<Rational>;

/// Dense row-major rational matrix. Zero-sized shapes are valid and are used
/// for maps into or out of the zero space.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static Matrix from_columns(const std::vector<Vec>& columns, std::size_t rows);
  static Matrix diagonal(const Vec& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec column(std::size_t c) const;

  Matrix transpose() const;
  bool is_zero() const;

  Matrix operator*(const Matrix& rhs) const;
  Vec operator*(const Vec& v) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(const Rational& k) const;

  bool operator==(const Matrix& rhs) const = default;

  /// Kronecker product with the left factor as the major index.
  static Matrix kron(const Matrix& a, const Matrix& b);
  static Matrix block_diagonal(const std::vector<Matrix>& blocks);
  static Matrix hstack(const std::vector<Matrix>& blocks, std::size_t rows);
  static Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec scaled(const Vec& v, const Rational& k);
bool is_zero(const Vec& v);

struct RowEchelon {
  Matrix reduced;                    ///< reduced row echelon form
  std::vector<std::size_t> pivots;   ///< pivot column of each nonzero row
};

RowEchelon rref(Matrix m);
std::size_t rank(const Matrix& m);

/// Columns form a basis of { x : m x = 0 }, one column per free variable.
Matrix nullspace(const Matrix& m);

std::optional<Matrix> inverse(const Matrix& m);

/// Some solution X of A X = B, if one exists.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

/// Solution of A X = B required to be unique; nullopt when there is none or
/// when A has a nontrivial kernel.
std::optional<Matrix> solve_unique(const Matrix& a, const Matrix& b);

}  // namespace catmeas
