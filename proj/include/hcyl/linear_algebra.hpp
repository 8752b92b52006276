#pragma once

// Dense exact rational matrices. Elimination is fraction-free (Bareiss) on the
// row-scaled integer matrix; the pivot is the first nonzero entry scanning rows
// in index order.

#include <optional>
#include <vector>

#include "hcyl/errors.hpp"
#include "hcyl/rational.hpp"

namespace hcyl {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  static RationalMatrix identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionViolated("matrix shapes do not chain");
    RationalMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  bool operator==(const RationalMatrix&) const = default;

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_identity() const { return rows_ == cols_ && *this == identity(rows_); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

namespace detail {

// Scale each row of [a | b] to integers (scaling rows of both sides together
// leaves the solution set unchanged).
inline std::vector<std::vector<Integer>> integer_rows(const RationalMatrix& a, const RationalMatrix* b,
                                                      std::vector<Integer>* row_scale) {
  const int n = a.rows();
  const int m = b ? b->cols() : 0;
  std::vector<std::vector<Integer>> out(n, std::vector<Integer>(a.cols() + m));
  if (row_scale) row_scale->assign(n, 1);
  for (int i = 0; i < n; ++i) {
    Integer l = 1;
    for (int j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (int j = 0; j < m; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), (*b)(i, j).get_den_mpz_t());
    for (int j = 0; j < a.cols(); ++j) out[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
    for (int j = 0; j < m; ++j) out[i][a.cols() + j] = (*b)(i, j).get_num() * (l / (*b)(i, j).get_den());
    if (row_scale) (*row_scale)[i] = l;
  }
  return out;
}

// Bareiss forward elimination on the first n columns. Returns false if singular.
inline bool bareiss(std::vector<std::vector<Integer>>& m, int n, int& sign) {
  sign = 1;
  Integer prev = 1;
  const int width = m.empty() ? 0 : static_cast<int>(m[0].size());
  for (int k = 0; k < n; ++k) {
    int p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return false;
    if (p != k) {
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < width; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return true;
}

}  // namespace detail

inline Rational determinant(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw PreconditionViolated("determinant of non-square matrix");
  const int n = a.rows();
  if (n == 0) return 1;
  std::vector<Integer> scale;
  auto m = detail::integer_rows(a, nullptr, &scale);
  int sign = 1;
  if (!detail::bareiss(m, n, sign)) return 0;
  Rational det(m[n - 1][n - 1] * sign);
  for (const auto& s : scale) det /= s;
  return det;
}

// Solve a X = b; nullopt if a is singular.
inline std::optional<RationalMatrix> solve(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) throw PreconditionViolated("solve: shape mismatch");
  const int n = a.rows();
  const int m = b.cols();
  auto aug = detail::integer_rows(a, &b, nullptr);
  int sign = 1;
  if (!detail::bareiss(aug, n, sign)) return std::nullopt;
  RationalMatrix x(n, m);
  for (int c = 0; c < m; ++c) {
    for (int i = n - 1; i >= 0; --i) {
      Rational acc(aug[i][n + c]);
      for (int j = i + 1; j < n; ++j)
        if (aug[i][j] != 0) acc -= Rational(aug[i][j]) * x(j, c);
      x(i, c) = acc / Rational(aug[i][i]);
    }
  }
  return x;
}

inline std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
  return solve(a, RationalMatrix::identity(a.rows()));
}

}  // namespace hcyl
