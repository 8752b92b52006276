#include <gtest/gtest.h>

#include <random>

#include "hcyl/k1_ldet.hpp"
#include "test_support.hpp"

using namespace hcyl;
using namespace hcyl::testing;

namespace {

std::vector<int> zb(std::vector<int> v) {
  for (int& a : v) a -= 1;
  return v;
}
Series X(int rank, int cap, std::vector<int> letters, Rational c = 1) {
  return Series::monomial(rank, cap, zb(letters), c);
}
CyclicSeries C(int rank, int cap, std::vector<int> letters, Rational c = 1) {
  CyclicSeries s(rank, cap);
  s.add(zb(letters), c);
  return s;
}
SeriesMatrix M2(const Series& a, const Series& b, const Series& c, const Series& d) {
  SeriesMatrix m(2, a.rank(), a.cap());
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

}  // namespace

TEST(Eps, Example) {
  SeriesMatrix m = M2(Series::one(2, 2) + X(2, 2, {1}), X(2, 2, {2}), Series(2, 2), Series::constant(2, 2, 2));
  RationalMatrix e = eps_matrix(m);
  EXPECT_EQ(e(0, 0), 1);
  EXPECT_EQ(e(0, 1), 0);
  EXPECT_EQ(e(1, 1), 2);
}

TEST(Invert, Examples) {
  const int cap = 4;
  SeriesMatrix n = M2(Series(2, cap), X(2, cap, {1}), Series(2, cap), Series(2, cap));
  SeriesMatrix id = SeriesMatrix::identity(2, 2, cap);
  EXPECT_EQ(matrix_invert(id + n), id - n);
  SeriesMatrix d = M2(Series::one(2, cap) + X(2, cap, {1}), Series(2, cap), Series(2, cap), Series::one(2, cap) - X(2, cap, {2}));
  SeriesMatrix di = matrix_invert(d);
  EXPECT_EQ(di(0, 0), series_invert(Series::one(2, cap) + X(2, cap, {1})));
  EXPECT_EQ(d * di, id);
  EXPECT_THROW(matrix_invert(n), SingularAugmentation);
}

TEST(Invert, RandomMultiplyBack) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + trial % 3;
    SeriesMatrix a = random_unit_matrix(rng, n, 2, 3);
    SeriesMatrix ai = matrix_invert(a);
    EXPECT_EQ(a * ai, SeriesMatrix::identity(n, 2, 3));
    EXPECT_EQ(ai * a, SeriesMatrix::identity(n, 2, 3));
  }
}

TEST(Ldet, ScalarCase) {
  const int cap = 3;
  SeriesMatrix a(1, 1, cap);
  a(0, 0) = Rational(2) * (Series::one(1, cap) + X(1, cap, {1}));
  K1Value v = ldet(a);
  EXPECT_EQ(v.det_eps, 2);
  EXPECT_EQ(v.log, C(1, cap, {1}) - C(1, cap, {1, 1}, Rational(1, 2)) + C(1, cap, {1, 1, 1}, Rational(1, 3)));
}

TEST(Ldet, OffDiagonalExample) {
  const int cap = 4;
  SeriesMatrix a = M2(Series::one(2, cap), X(2, cap, {1}), X(2, cap, {2}), Series::one(2, cap));
  K1Value v = ldet(a);
  EXPECT_EQ(v.det_eps, 1);
  EXPECT_EQ(v.log, -C(2, cap, {1, 2}) - C(2, cap, {1, 2, 1, 2}, Rational(1, 2)));
}

TEST(Ldet, Homomorphism) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 1 + trial % 3, cap = 2 + trial % 3;
    SeriesMatrix a = random_unit_matrix(rng, n, 2, cap), b = random_unit_matrix(rng, n, 2, cap);
    EXPECT_EQ(ldet(a * b), ldet(a) * ldet(b));
  }
}

TEST(Ldet, ConjugationByPermutation) {
  std::mt19937_64 rng(23);
  SeriesMatrix a = random_unit_matrix(rng, 3, 2, 3);
  RationalMatrix p(3, 3);
  p(0, 1) = p(1, 2) = p(2, 0) = 1;
  SeriesMatrix conj = a.rational_times(p).times_rational(*inverse(p));
  EXPECT_EQ(ldet(conj), ldet(a));
}

TEST(Ldet, ElementaryInvariance) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 2 + trial % 2, cap = 3;
    SeriesMatrix a = random_unit_matrix(rng, n, 2, cap);
    SeriesMatrix e = SeriesMatrix::identity(n, 2, cap);
    e(0, n - 1) = random_series(rng, 2, cap, 1);
    EXPECT_EQ(ldet(e * a), ldet(a));
    EXPECT_EQ(ldet(a * e), ldet(a));
  }
}

TEST(Ldet, TransposeCanDiffer) {
  // X = [[x1, x2], [x3, 0]]: tr X^3 contains x1x2x3 while tr (X^T)^3 contains x1x3x2.
  const int cap = 3;
  SeriesMatrix a = M2(Series::one(3, cap) + X(3, cap, {1}), X(3, cap, {2}), X(3, cap, {3}), Series::one(3, cap));
  K1Value v = ldet(a), vt = ldet(a.transpose());
  EXPECT_NE(v, vt);
  EXPECT_EQ(v.log.coeff(zb({1, 2, 3})), Rational(1));
  EXPECT_EQ(vt.log.coeff(zb({1, 2, 3})), Rational(0));
  EXPECT_EQ(vt.log.coeff(zb({1, 3, 2})), Rational(1));
}

TEST(LdetGraded, Examples) {
  SeriesMatrix a(1, 1, 3);
  a(0, 0) = Series::one(1, 3) + X(1, 3, {1});
  EXPECT_EQ(ldet_graded(a, 1), C(1, 3, {1}));
  SeriesMatrix b = SeriesMatrix::identity(2, 2, 3);
  b(0, 0) += X(2, 3, {1, 2});
  EXPECT_EQ(ldet_graded(b, 2), C(2, 3, {1, 2}));
  SeriesMatrix p(1, 2, 3), q(1, 2, 3);
  p(0, 0) = Series::one(2, 3) + X(2, 3, {1});
  q(0, 0) = Series::one(2, 3) + X(2, 3, {2});
  EXPECT_THROW(ldet_graded(p * q, 2), PreconditionViolated);
}

TEST(LdetGraded, AgreesWithLdetSlice) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2, deg = 2 + trial % 2, cap = 4;
    SeriesMatrix a = SeriesMatrix::identity(n, 2, cap);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) += random_series(rng, 2, cap, deg, 2);
    EXPECT_EQ(ldet_graded(a, deg), ldet(a).log.degree_part(deg));
  }
}

TEST(DeltaAlt, Examples) {
  const int cap = 3;
  SeriesMatrix a1(1, 2, cap), a2(1, 2, cap);
  a1(0, 0) = X(2, cap, {1});
  a2(0, 0) = X(2, cap, {2});
  CyclicSeries d = delta_alt({a1, a2});
  EXPECT_TRUE(d.degree_part(1).is_zero());
  EXPECT_EQ(d.degree_part(2), -C(2, cap, {1, 2}));
  CyclicSeries d1 = delta_alt({a1});
  EXPECT_EQ(d1, -ldet(SeriesMatrix::identity(1, 2, cap) + a1).log);
  SeriesMatrix bad = SeriesMatrix::identity(1, 2, cap);
  EXPECT_THROW(delta_alt({bad}), AugmentationNotZero);
}

TEST(DeltaAlt, VanishesBelowDegree) {
  std::mt19937_64 rng(26);
  for (int d = 1; d <= 3; ++d) {
    std::vector<SeriesMatrix> as;
    for (int j = 0; j < d; ++j) {
      SeriesMatrix m(2, 2, d + 1);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m(r, c) = random_series(rng, 2, d + 1, 1, 2);
      as.push_back(m);
    }
    CyclicSeries v = delta_alt(as);
    for (int k = 1; k < d; ++k) EXPECT_TRUE(v.degree_part(k).is_zero()) << "d=" << d << " k=" << k;
  }
}

TEST(Abelian, Examples) {
  EXPECT_TRUE(abelianize(X(2, 3, {1, 2}) - X(2, 3, {2, 1})).is_zero());
  const int cap = 3;
  CommSeries t1 = CommSeries::variable(2, cap, 0), t2 = CommSeries::variable(2, cap, 1);
  CommSeries one = CommSeries::constant(2, cap, 1);
  CommMatrix d{{one + t1, CommSeries(2, cap)}, {CommSeries(2, cap), one + t2}};
  EXPECT_EQ(comm_det(d), (one + t1) * (one + t2));
  SeriesMatrix a = M2(Series::one(2, 4), X(2, 4, {1}), X(2, 4, {2}), Series::one(2, 4));
  CommSeries lhs = comm_exp(abelianize(ldet(a).log));
  CommSeries u1 = CommSeries::variable(2, 4, 0), u2 = CommSeries::variable(2, 4, 1);
  EXPECT_EQ(lhs, CommSeries::constant(2, 4, 1) - u1 * u2);
}

TEST(Abelian, CommutativeSquare) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 1 + trial % 3;
    SeriesMatrix a = random_unit_matrix(rng, n, 2, 3);
    K1Value v = ldet(a);
    EXPECT_EQ(v.det_eps * comm_exp(abelianize(v.log)), comm_det(abelianize(a)));
  }
}
