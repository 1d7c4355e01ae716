#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace urnlab {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Replacement matrices and their diagonal
/// blocks are a few dozen rows at most, so everything is by value and nothing
/// is clever.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> init);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept {
    return entries_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const noexcept {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) noexcept {
    return {entries_.data() + r * cols_, cols_};
  }

  /// Copy of the submatrix starting at (row0, col0).
  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
               std::size_t ncols) const;

  /// Exact test; input zeros are structural, never computed.
  bool is_zero() const noexcept;
  bool all_finite() const noexcept;

  const Vec& entries() const noexcept { return entries_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec entries_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// Row vector times matrix.
Vec operator*(const Vec& v, const Matrix& a);
/// Matrix times column vector.
Vec operator*(const Matrix& a, const Vec& v);

Matrix transpose(const Matrix& a);
double trace(const Matrix& a);

double dot(const Vec& a, const Vec& b);
double sum(const Vec& v);
double max_abs(const Vec& v);
double max_abs(const Matrix& a);
Vec gather(const Vec& v, std::span<const std::size_t> indices);

}  // namespace urnlab
