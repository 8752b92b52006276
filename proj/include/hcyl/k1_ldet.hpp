#pragma once

// Matrices over the truncated completion, inversion, the log-determinant
// ldet(A) = (det eps(A), [tr log(A eps(A)^-1)]) and the commutative reduction.

#include <map>
#include <vector>

#include "hcyl/cyclic_words.hpp"
#include "hcyl/errors.hpp"
#include "hcyl/linear_algebra.hpp"
#include "hcyl/tensor_series.hpp"

namespace hcyl {

class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(int rows, int cols, int rank, int cap)
      : rows_(rows), cols_(cols), rank_(rank), cap_(cap),
        data_(static_cast<std::size_t>(rows) * cols, Series(rank, cap)) {}
  SeriesMatrix(int n, int rank, int cap) : SeriesMatrix(n, n, rank, cap) {}

  static SeriesMatrix identity(int n, int rank, int cap) {
    SeriesMatrix m(n, rank, cap);
    for (int i = 0; i < n; ++i) m(i, i) = Series::one(rank, cap);
    return m;
  }
  static SeriesMatrix from_rational(const RationalMatrix& r, int rank, int cap) {
    SeriesMatrix m(r.rows(), r.cols(), rank, cap);
    for (int i = 0; i < r.rows(); ++i)
      for (int j = 0; j < r.cols(); ++j) m(i, j) = Series::constant(rank, cap, r(i, j));
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_; }
  int rank() const { return rank_; }
  int cap() const { return cap_; }
  bool is_square() const { return rows_ == cols_; }

  Series& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Series& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  SeriesMatrix& operator+=(const SeriesMatrix& o) {
    check_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  SeriesMatrix& operator-=(const SeriesMatrix& o) {
    check_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend SeriesMatrix operator+(SeriesMatrix a, const SeriesMatrix& b) { return a += b; }
  friend SeriesMatrix operator-(SeriesMatrix a, const SeriesMatrix& b) { return a -= b; }
  friend SeriesMatrix operator-(SeriesMatrix a) {
    for (auto& s : a.data_) s = -s;
    return a;
  }
  friend SeriesMatrix operator*(const Rational& q, SeriesMatrix a) {
    for (auto& s : a.data_) s = q * s;
    return a;
  }

  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) { return multiply(a, b, a.cap_); }

  static SeriesMatrix multiply(const SeriesMatrix& a, const SeriesMatrix& b, int max_degree) {
    if (a.cols_ != b.rows_) throw PreconditionViolated("series matrix shapes do not chain");
    if (a.cap_ != b.cap_) throw TruncationMismatch("series matrix caps differ");
    SeriesMatrix c(a.rows_, b.cols_, a.rank_, a.cap_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Series& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) {
          const Series& y = b(k, j);
          if (y.is_zero()) continue;
          c(i, j) += Series::multiply(x, y, max_degree);
        }
      }
    return c;
  }

  SeriesMatrix times_rational(const RationalMatrix& r) const {
    if (cols_ != r.rows()) throw PreconditionViolated("shape mismatch with rational matrix");
    SeriesMatrix c(rows_, r.cols(), rank_, cap_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Series& x = (*this)(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < r.cols(); ++j)
          if (r(k, j) != 0) c(i, j) += r(k, j) * x;
      }
    return c;
  }

  SeriesMatrix rational_times(const RationalMatrix& r) const {
    if (r.cols() != rows_) throw PreconditionViolated("shape mismatch with rational matrix");
    SeriesMatrix c(r.rows(), cols_, rank_, cap_);
    for (int i = 0; i < r.rows(); ++i)
      for (int k = 0; k < rows_; ++k) {
        if (r(i, k) == 0) continue;
        for (int j = 0; j < cols_; ++j) {
          const Series& x = (*this)(k, j);
          if (!x.is_zero()) c(i, j) += r(i, k) * x;
        }
      }
    return c;
  }

  SeriesMatrix transpose() const {
    SeriesMatrix t(cols_, rows_, rank_, cap_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  SeriesMatrix truncated(int new_cap) const {
    SeriesMatrix t(rows_, cols_, rank_, new_cap);
    for (std::size_t k = 0; k < data_.size(); ++k) t.data_[k] = data_[k].truncated(new_cap);
    return t;
  }

  bool is_zero() const {
    for (const auto& s : data_)
      if (!s.is_zero()) return false;
    return true;
  }

  Series trace() const {
    Series t(rank_, cap_);
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  void swap_columns(int a, int b) {
    for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  bool operator==(const SeriesMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && cap_ == o.cap_ && data_ == o.data_;
  }

 private:
  void check_shape(const SeriesMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionViolated("series matrix shapes differ");
    if (cap_ != o.cap_) throw TruncationMismatch("series matrix caps differ");
  }

  int rows_ = 0, cols_ = 0, rank_ = 1, cap_ = 0;
  std::vector<Series> data_;
};

// Element of K1 of the truncated completion: Q^x (+) prod_k H^{(x)k}/Z_k.
struct K1Value {
  Rational det_eps = 1;
  CyclicSeries log;

  friend K1Value operator*(const K1Value& a, const K1Value& b) { return {a.det_eps * b.det_eps, a.log + b.log}; }
  K1Value inverse() const { return {1 / det_eps, -log}; }
  bool operator==(const K1Value& o) const { return det_eps == o.det_eps && log == o.log; }
};

inline RationalMatrix eps_matrix(const SeriesMatrix& a) {
  RationalMatrix e(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) e(i, j) = a(i, j).constant_term();
  return e;
}

inline SeriesMatrix matrix_invert(const SeriesMatrix& a) {
  if (!a.is_square()) throw PreconditionViolated("matrix_invert needs a square matrix");
  auto einv = inverse(eps_matrix(a));
  if (!einv) throw SingularAugmentation("augmentation matrix is singular");
  const int n = a.size();
  // a = b e with b = a e^-1 = I - x, so a^-1 = e^-1 (I + x + x^2 + ...)
  SeriesMatrix x = SeriesMatrix::identity(n, a.rank(), a.cap()) - a.times_rational(*einv);
  SeriesMatrix sum = SeriesMatrix::identity(n, a.rank(), a.cap());
  SeriesMatrix power = sum;
  for (int k = 1; k <= a.cap(); ++k) {
    power = power * x;
    if (power.is_zero()) break;
    sum += power;
  }
  return sum.rational_times(*einv);
}

inline K1Value ldet(const SeriesMatrix& a) {
  if (!a.is_square()) throw PreconditionViolated("ldet needs a square matrix");
  RationalMatrix e = eps_matrix(a);
  auto einv = inverse(e);
  if (!einv) throw SingularAugmentation("augmentation matrix is singular");
  const int n = a.size();
  SeriesMatrix y = a.times_rational(*einv) - SeriesMatrix::identity(n, a.rank(), a.cap());
  Series tr(a.rank(), a.cap());
  SeriesMatrix power = y;
  for (int k = 1; k <= a.cap(); ++k) {
    if (power.is_zero()) break;
    tr += Rational(k % 2 == 1 ? 1 : -1, k) * power.trace();
    if (k < a.cap()) power = power * y;
  }
  return K1Value{determinant(e), project_cyclic(tr)};
}

// Degree-n slice of ldet(A).log when A eps(A)^-1 = I mod degree n.
inline CyclicSeries ldet_graded(const SeriesMatrix& a, int n) {
  if (!a.is_square()) throw PreconditionViolated("ldet_graded needs a square matrix");
  if (n < 1 || n > a.cap()) throw PreconditionViolated("ldet_graded degree outside 1..cap");
  auto einv = inverse(eps_matrix(a));
  if (!einv) throw SingularAugmentation("augmentation matrix is singular");
  SeriesMatrix y = a.times_rational(*einv) - SeriesMatrix::identity(a.size(), a.rank(), a.cap());
  for (int i = 0; i < y.rows(); ++i)
    for (int j = 0; j < y.cols(); ++j) {
      int low = y(i, j).lowest_degree();
      if (low >= 0 && low < n)
        throw PreconditionViolated("A eps(A)^-1 is not the identity below degree " + std::to_string(n));
    }
  return project_cyclic(y.trace().degree_part(n));
}

// Alternating sum over subsets J of (-1)^{|J|} ldet(I + sum_{j in J} A_j).log
inline CyclicSeries delta_alt(const std::vector<SeriesMatrix>& as) {
  if (as.empty()) throw PreconditionViolated("delta_alt needs at least one matrix");
  const int n = as[0].size();
  const int rank = as[0].rank();
  const int cap = as[0].cap();
  for (const auto& m : as) {
    if (m.size() != n || !m.is_square()) throw PreconditionViolated("delta_alt matrices must share their size");
    if (m.cap() != cap) throw TruncationMismatch("delta_alt matrices must share their cap");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (m(i, j).constant_term() != 0) throw AugmentationNotZero("delta_alt inputs must have entries in the augmentation ideal");
  }
  const std::size_t d = as.size();
  CyclicSeries total(rank, cap);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    SeriesMatrix m = SeriesMatrix::identity(n, rank, cap);
    int bits = 0;
    for (std::size_t j = 0; j < d; ++j)
      if (mask & (std::size_t{1} << j)) {
        m += as[j];
        ++bits;
      }
    CyclicSeries l = ldet(m).log;
    if (bits % 2 == 0)
      total += l;
    else
      total -= l;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Commutative truncated power series in t_1..t_rank (the abelianized completion).

class CommSeries {
 public:
  using Exponents = std::vector<int>;

  CommSeries() = default;
  CommSeries(int rank, int cap) : rank_(rank), cap_(cap) {}
  static CommSeries constant(int rank, int cap, const Rational& c) {
    CommSeries s(rank, cap);
    s.add(Exponents(rank, 0), c);
    return s;
  }
  static CommSeries variable(int rank, int cap, int index) {
    CommSeries s(rank, cap);
    Exponents e(rank, 0);
    e[index] = 1;
    s.add(e, 1);
    return s;
  }

  int rank() const { return rank_; }
  int cap() const { return cap_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  void add(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    int deg = 0;
    for (int x : e) deg += x;
    if (deg > cap_) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational constant_term() const {
    auto it = terms_.find(Exponents(rank_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
  }
  bool is_zero() const { return terms_.empty(); }

  CommSeries& operator+=(const CommSeries& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  CommSeries& operator-=(const CommSeries& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
  }
  friend CommSeries operator+(CommSeries a, const CommSeries& b) { return a += b; }
  friend CommSeries operator-(CommSeries a, const CommSeries& b) { return a -= b; }
  friend CommSeries operator*(const Rational& q, const CommSeries& a) {
    CommSeries out(a.rank_, a.cap_);
    for (const auto& [e, c] : a.terms_) out.add(e, q * c);
    return out;
  }
  friend CommSeries operator*(const CommSeries& a, const CommSeries& b) {
    a.check(b);
    CommSeries out(a.rank_, a.cap_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.rank_);
        for (int i = 0; i < a.rank_; ++i) e[i] = ea[i] + eb[i];
        out.add(e, ca * cb);
      }
    return out;
  }
  bool operator==(const CommSeries& o) const { return rank_ == o.rank_ && cap_ == o.cap_ && terms_ == o.terms_; }
  bool operator!=(const CommSeries& o) const { return !(*this == o); }

 private:
  void check(const CommSeries& o) const {
    if (cap_ != o.cap_) throw TruncationMismatch("commutative caps differ");
    if (rank_ != o.rank_) throw RankMismatch("commutative ranks differ");
  }
  int rank_ = 0, cap_ = 0;
  std::map<Exponents, Rational> terms_;
};

inline CommSeries comm_invert(const CommSeries& u) {
  Rational c = u.constant_term();
  if (c == 0) throw NotAUnit("commutative series with zero constant term");
  CommSeries y = (1 / c) * u - CommSeries::constant(u.rank(), u.cap(), 1);
  CommSeries result = CommSeries::constant(u.rank(), u.cap(), 1);
  CommSeries power = result;
  for (int k = 1; k <= u.cap(); ++k) {
    power = Rational(-1) * (power * y);
    if (power.is_zero()) break;
    result += power;
  }
  return (1 / c) * result;
}

inline CommSeries comm_exp(const CommSeries& v) {
  if (v.constant_term() != 0) throw BadAugmentation("exp needs constant term 0");
  CommSeries result = CommSeries::constant(v.rank(), v.cap(), 1);
  CommSeries power = result;
  for (int k = 1; k <= v.cap(); ++k) {
    power = Rational(1, k) * (power * v);
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

inline CommSeries comm_pow(const CommSeries& u, long n) {
  CommSeries base = n < 0 ? comm_invert(u) : u;
  CommSeries out = CommSeries::constant(u.rank(), u.cap(), 1);
  for (long k = 0; k < (n < 0 ? -n : n); ++k) out = out * base;
  return out;
}

inline CommSeries abelianize(const Series& s) {
  CommSeries out(s.rank(), s.cap());
  s.for_each_term([&](int d, MonoKey k, const Rational& c) {
    CommSeries::Exponents e(s.rank(), 0);
    for (int p = 0; p < d; ++p) ++e[mono_letter(k, d, p)];
    out.add(e, c);
  });
  return out;
}

inline CommSeries abelianize(const CyclicSeries& s) {
  CommSeries out(s.rank(), s.cap());
  s.for_each_term([&](int d, MonoKey k, const Rational& c) {
    CommSeries::Exponents e(s.rank(), 0);
    for (int p = 0; p < d; ++p) ++e[mono_letter(k, d, p)];
    out.add(e, c);
  });
  return out;
}

using CommMatrix = std::vector<std::vector<CommSeries>>;

inline CommMatrix abelianize(const SeriesMatrix& a) {
  CommMatrix m(a.rows(), std::vector<CommSeries>(a.cols()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m[i][j] = abelianize(a(i, j));
  return m;
}

// Determinant over the commutative local ring by elimination on unit pivots.
inline CommSeries comm_det(CommMatrix m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) throw PreconditionViolated("comm_det of empty matrix");
  const int rank = m[0][0].rank();
  const int cap = m[0][0].cap();
  CommSeries det = CommSeries::constant(rank, cap, 1);
  for (int k = 0; k < n; ++k) {
    int p = k;
    while (p < n && m[p][k].constant_term() == 0) ++p;
    if (p == n) throw SingularAugmentation("commutative determinant: augmentation matrix is singular");
    if (p != k) {
      std::swap(m[p], m[k]);
      det = Rational(-1) * det;
    }
    det = det * m[k][k];
    CommSeries inv = comm_invert(m[k][k]);
    for (int i = k + 1; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      CommSeries f = m[i][k] * inv;
      for (int j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

}  // namespace hcyl
