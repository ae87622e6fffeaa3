// Exact rational scalars, vectors and dense matrices.
//
// Polytope data is kept in exact arithmetic end to end so that equality
// cases of the volume product come out as exact rationals. Matrices are
// small (dimension <= 8, a few hundred rows at most), so a plain row-major
// container with Gaussian elimination is all that is needed.

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mahler {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using QVector = std::vector<Rational>;

inline bool is_zero(const Rational& q) { return q.is_zero(); }
inline int sign(const Rational& q) { return q.sign(); }

/// Parses "a", "a/b", "-a/b" or a finite decimal such as "0.125" exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

/// Exact rational square root when it exists.
bool is_perfect_square(const Rational& q, Rational* root = nullptr);

Rational dot(const QVector& a, const QVector& b);

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  QVector row(std::size_t r) const;
  QVector col(std::size_t c) const;
  void append_row(const QVector& r);

  QMatrix transpose() const;
  QMatrix operator*(const QMatrix& other) const;
  QVector operator*(const QVector& v) const;
  bool operator==(const QMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

std::size_t rank(QMatrix m);
Rational determinant(QMatrix m);
/// Throws std::domain_error when the matrix is singular.
QMatrix inverse(const QMatrix& m);
bool is_diagonal(const QMatrix& m);

}  // namespace mahler
