#include <gtest/gtest.h>

#include <random>

#include "hcyl/word_ring.hpp"
#include "test_support.hpp"

using namespace hcyl;

namespace {

GroupWord W(const char* s) { return parse_word(s); }
RingElement R(const char* s) { return parse_ring_element(s); }

// Reduction by repeated scanning, independent of the stack pass.
std::vector<int> naive_reduce(std::vector<int> v) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i] == -v[i + 1]) {
        v.erase(v.begin() + i, v.begin() + i + 2);
        changed = true;
        break;
      }
  }
  return v;
}

}  // namespace

TEST(GroupWord, ReducesOnConstruction) {
  EXPECT_EQ(GroupWord({1, 2, -2, -1, 3}).letters(), std::vector<int>{3});
  EXPECT_TRUE(GroupWord({1, -1}).is_identity());
  EXPECT_EQ(W("g1 g2 G2 g3"), W("g1 g3"));
}

TEST(GroupWord, ReductionIsConfluent) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> gen(-3, 3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> raw;
    int n = 4 + trial % 20;
    for (int i = 0; i < n; ++i) {
      int a = 0;
      while (a == 0) a = gen(rng);
      raw.push_back(a);
    }
    EXPECT_EQ(GroupWord(raw).letters(), naive_reduce(raw));
  }
}

TEST(GroupWord, TextRoundTrip) {
  GroupWord w = W("g1 G2 g3 g3");
  EXPECT_EQ(format_word(w), "g1 G2 g3 g3");
  EXPECT_EQ(parse_word(format_word(w)), w);
  EXPECT_EQ(format_word(GroupWord()), "1");
  EXPECT_THROW(parse_word("g1 x2"), ParseError);
  EXPECT_THROW(parse_word("gG1"), ParseError);
}

TEST(RingElement, TextRoundTrip) {
  RingElement v = R("2*g1 - 1/3*G2 g1 + 5");
  EXPECT_EQ(v.coeff(W("g1")), 2);
  EXPECT_EQ(v.coeff(W("G2 g1")), Rational(-1, 3));
  EXPECT_EQ(v.coeff(GroupWord()), 5);
  EXPECT_EQ(parse_ring_element(format_ring_element(v)), v);
  EXPECT_TRUE(parse_ring_element("0").is_zero());
}

TEST(Bar, Examples) {
  EXPECT_EQ(bar(RingElement(W("g1 g2"))), RingElement(W("G2 G1")));
  EXPECT_EQ(bar(RingElement::scalar(1)), RingElement::scalar(1));
  EXPECT_EQ(bar(R("2*g1 - G2")), R("2*G1 - g2"));
}

TEST(Bar, AntiAutomorphismAndInvolution) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    RingElement u, v;
    for (int k = 0; k < 3; ++k) {
      u.add(random_word(rng, 3, 5), random_rational(rng));
      v.add(random_word(rng, 3, 5), random_rational(rng));
    }
    EXPECT_EQ(bar(u * v), bar(v) * bar(u));
    EXPECT_EQ(bar(bar(u)), u);
  }
}

TEST(Fox, Axioms) {
  EXPECT_EQ(fox_derivative(W("g1"), 1), RingElement::scalar(1));
  EXPECT_EQ(fox_derivative(W("G1"), 1), R("-G1"));
  EXPECT_TRUE(fox_derivative(W("g2"), 1).is_zero());
}

TEST(Fox, CommutatorExample) {
  EXPECT_EQ(fox_derivative(W("g1 g2 G1 G2"), 1), R("1 - g1 g2 G1"));
}

TEST(Fox, ProductRule) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    GroupWord u = random_word(rng, 3, 6), v = random_word(rng, 3, 6);
    for (int i = 1; i <= 3; ++i)
      EXPECT_EQ(fox_derivative(u * v, i), fox_derivative(u, i) + RingElement(u) * fox_derivative(v, i));
  }
}

TEST(Fox, FundamentalFormula) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    int rank = 2 + trial % 5;
    GroupWord w = random_word(rng, rank, 12);
    RingElement rhs;
    for (int i = 1; i <= rank; ++i)
      rhs += fox_derivative(w, i) * (RingElement(GroupWord::generator(i)) - RingElement::scalar(1));
    EXPECT_EQ(RingElement(w) - RingElement::scalar(1), rhs);
  }
}

TEST(FoxMatrix, Examples) {
  auto m = fox_matrix({W("g1 g2 G1 G2")}, {1});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0][0], R("1 - g1 G2 G1"));
  auto one = fox_matrix({W("g1")}, {1});
  EXPECT_EQ(one[0][0], RingElement::scalar(1));
}

TEST(FoxMatrix, ShapeIsGeneratorsByRelators) {
  auto m = fox_matrix({W("g1 g2"), W("g2"), W("g3 g1")}, {1, 2});
  ASSERT_EQ(m.size(), 2u);
  ASSERT_EQ(m[0].size(), 3u);
  EXPECT_EQ(m[1][0], RingElement(W("G1")));  // bar(g1)
  EXPECT_EQ(m[0][2], RingElement(W("G3")));
}
