#include <gtest/gtest.h>

#include <random>

#include "hcyl/clasper.hpp"
#include "hcyl/random_inputs.hpp"
#include "test_support.hpp"

using namespace hcyl;
using namespace hcyl::testing;

namespace {

Series x(int rank, int cap, int i) { return Series::generator(rank, cap, i - 1); }

CyclicSeries cyc(int rank, int cap, std::vector<int> letters, Rational c = 1) {
  for (int& a : letters) a -= 1;
  CyclicSeries s(rank, cap);
  s.add(letters, c);
  return s;
}

}  // namespace

TEST(TreeBracket, Examples) {
  const int cap = 3;
  Series a = x(2, cap, 1), b = x(2, cap, 2);
  TreeClasper t{ClasperTree::node(ClasperTree::make_leaf(a), ClasperTree::make_leaf(b)), 0};
  EXPECT_EQ(tree_bracket(t), a * b - b * a);
  t.twists = 1;
  EXPECT_EQ(tree_bracket(t), -(a * b - b * a));
  TreeClasper three{ClasperTree::node(ClasperTree::node(ClasperTree::make_leaf(a), ClasperTree::make_leaf(b)),
                                      ClasperTree::make_leaf(b)),
                    0};
  Series ab = a * b - b * a;
  EXPECT_EQ(tree_bracket(three), ab * b - b * ab);
  EXPECT_TRUE(dynkin_is_lie(tree_bracket(three)));
  EXPECT_THROW(tree_bracket(TreeClasper{ClasperTree::make_leaf(a), 0}), PreconditionViolated);
}

TEST(TreeBracket, LieAndAntisymmetric) {
  std::mt19937_64 rng(61);
  const int rank = 4, cap = 4;
  for (int trial = 0; trial < 10; ++trial) {
    auto leaf = [&] {
      Series v(rank, cap);
      for (int k = 0; k < rank; ++k) v.add_term({k}, random_rational(rng));
      return ClasperTree::make_leaf(v);
    };
    ClasperTree l1 = leaf(), l2 = leaf(), l3 = leaf();
    ClasperTree left = ClasperTree::node(l1, l2);
    TreeClasper t{ClasperTree::node(left, l3), trial % 3};
    TreeClasper swapped{ClasperTree::node(l3, left), trial % 3};
    Series v = tree_bracket(t);
    EXPECT_TRUE(dynkin_is_lie(v));
    EXPECT_EQ(tree_bracket(swapped), -v);
  }
}

TEST(SurgeryFactor, Examples) {
  const int cap = 4;
  OneLoopClasper c = basis_clasper({1});
  K1Value v = surgery_factor(c, 1, cap);
  EXPECT_EQ(v.det_eps, 1);
  EXPECT_TRUE(v.log.is_zero());
  OneLoopClasper c2 = basis_clasper({1, 2});
  K1Value v2 = surgery_factor(c2, 1, cap);
  EXPECT_TRUE(v2.log.degree_part(1).is_zero());
  EXPECT_EQ(v2.log.degree_part(2), cyc(2, cap, {1, 2}, -2));
  OneLoopClasper flipped = c2;
  flipped.twists[0] = 1;
  EXPECT_NE(surgery_factor(flipped, 1, cap), v2);
  flipped.twists[1] = 1;
  EXPECT_EQ(surgery_factor(flipped, 1, cap), v2);
}

TEST(PsiLeading, Examples) {
  const int cap = 4;
  EXPECT_TRUE(psi_leading({x(2, cap, 1)}).is_zero());
  EXPECT_EQ(psi_leading({x(2, cap, 1), x(2, cap, 2)}), cyc(2, cap, {1, 2}, -2));
  CyclicSeries w = cyc(4, cap, {1, 2, 3});
  EXPECT_EQ(psi_leading({x(4, cap, 1), x(4, cap, 2), x(4, cap, 3)}), -w + cyc(4, cap, {3, 2, 1}));
}

TEST(PsiLeading, IsReflectionInvariant) {
  // -w - (-1)^d reverse(w) is fixed by the reflection, so its odd part vanishes.
  std::mt19937_64 rng(62);
  for (int d = 1; d <= 4; ++d)
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Series> xs;
      for (int i = 0; i < d; ++i) {
        Series v(4, d);
        for (int k = 0; k < 4; ++k) v.add_term({k}, random_rational(rng));
        xs.push_back(v);
      }
      CyclicSeries psi = psi_leading(xs);
      EXPECT_EQ(rho(psi), psi);
      EXPECT_TRUE(p_minus(psi).is_zero());
    }
}

TEST(ClasperMirror, ReversesLeaves) {
  std::mt19937_64 rng(63);
  OneLoopClasper c = random_clasper(rng, 3, 2);
  OneLoopClasper m = clasper_mirror(c);
  EXPECT_EQ(m.leaves.front(), c.leaves.back());
  EXPECT_EQ(m.twists.front(), c.twists.back());
  EXPECT_EQ(clasper_mirror(m).leaves, c.leaves);
  EXPECT_EQ(clasper_mirror_sign(1), 1);
  EXPECT_EQ(clasper_mirror_sign(2), -1);
  // on leading terms the reversal acts by (-1)^d
  for (int d = 1; d <= 4; ++d) {
    std::vector<Series> xs;
    for (int i = 1; i <= d; ++i) xs.push_back(x(4, d, 1 + (i * 3) % 4));
    std::vector<Series> rev(xs.rbegin(), xs.rend());
    EXPECT_EQ(psi_leading(rev), Rational(d % 2 ? -1 : 1) * psi_leading(xs));
  }
}

TEST(YPresentation, ShapeAndFoxMatrix) {
  LabeledPresentation p = y_presentation();
  EXPECT_EQ(p.num_generators(), 6);
  EXPECT_EQ(p.relators.size(), 3u);
  // displayed derivatives, generator order b1 b2 b3 a1 a2 a3
  auto w = [&](const char* s) { return RingElement(p.word(s)); };
  RingElement one = RingElement::scalar(1), zero;
  std::vector<std::vector<RingElement>> d_alpha{
      {one, zero, (w("a3") - w("B1")) * w("b2")},
      {(w("a1") - w("B2")) * w("b3"), one, zero},
      {zero, (w("a2") - w("B3")) * w("b1"), one}};
  std::vector<std::vector<RingElement>> d_beta{
      {zero, w("a2") - w("B3"), w("B1") * (one - w("b2 a1"))},
      {w("B2") * (one - w("b3 a2")), zero, w("a3") - w("B1")},
      {w("a1") - w("B2"), w("B3") * (one - w("b1 a3")), zero}};
  // the displayed entries hold in the group, so compare after evaluating at the labels
  const int cap = 4;
  auto labels = solve_labels(p, cap);
  auto eval = [&](const RingElement& v) {
    Series out(3, cap);
    for (const auto& [word, c] : v.terms()) {
      Series t = Series::constant(3, cap, c);
      for (int a : word.letters()) t = t * (a > 0 ? labels[a - 1] : series_invert(labels[-a - 1]));
      out += t;
    }
    return out;
  };
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      EXPECT_EQ(eval(fox_derivative(p.relators[l], p.index_of("a" + std::to_string(k + 1)))), eval(d_alpha[k][l])) << k << l;
      EXPECT_EQ(eval(fox_derivative(p.relators[l], p.index_of("b" + std::to_string(k + 1)))), eval(d_beta[k][l])) << k << l;
    }
}

TEST(YPresentation, LabelsSatisfyRecursion) {
  // alpha_i = [b_{i+1}^-1, b_{i+2}] b_{i+2} [b_{i+1}^-1, alpha_{i+1}] b_{i+2}^-1, iterated from alpha = 1
  const int cap = 5;
  LabeledPresentation p = y_presentation();
  auto labels = solve_labels(p, cap);
  MagnusExpansion theta = MagnusExpansion::standard(3, cap);
  std::vector<Series> b, a(3, Series::one(3, cap));
  for (int i = 1; i <= 3; ++i) b.push_back(theta.image(i));
  auto comm = [](const Series& u, const Series& v) { return u * v * series_invert(u) * series_invert(v); };
  for (int iter = 0; iter <= cap; ++iter) {
    std::vector<Series> next;
    for (int i = 0; i < 3; ++i) {
      const Series& b1 = b[(i + 1) % 3];
      const Series& b2 = b[(i + 2) % 3];
      next.push_back(comm(series_invert(b1), b2) * b2 * comm(series_invert(b1), a[(i + 1) % 3]) * series_invert(b2));
    }
    a = next;
  }
  for (int i = 0; i < 3; ++i) EXPECT_EQ(labels[p.index_of("a" + std::to_string(i + 1)) - 1], a[i]);
}

TEST(OneLoop, SolvedLabelsAndOracleSmall) {
  const int cap = 3;
  OneLoopClasper c = basis_clasper({1});
  LabeledPresentation p = one_loop_presentation(c, 1);
  auto labels = solve_labels(p, cap);
  Series one = Series::one(2, cap);
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(labels[p.index_of("a1_" + std::to_string(j)) - 1], one);
  EXPECT_EQ(labels[p.index_of("b1_2") - 1], one);
  EXPECT_EQ(labels[p.index_of("b1_3") - 1], one);
  EXPECT_EQ(labels[p.index_of("b1_1") - 1], one + x(2, cap, 1));
  EXPECT_EQ(labels[p.index_of("l") - 1], one);
  EXPECT_EQ(torsion(p, cap).torsion.log, surgery_factor(c, 1, cap).log);
}

TEST(OneLoop, OracleRandom) {
  std::mt19937_64 rng(64);
  for (int d = 1; d <= 3; ++d)
    for (int g = 1; g <= 2; ++g)
      for (int trial = 0; trial < 2; ++trial) {
        const int cap = d + 2;
        OneLoopClasper c = random_clasper(rng, d, g);
        LabeledPresentation base = trivial_cylinder(g);
        CylinderInvariant after = torsion(one_loop_presentation(c, base), cap);
        CylinderInvariant before = torsion(one_loop_presentation(c, base, false), cap);
        EXPECT_EQ(before.torsion, torsion(base, cap).torsion);
        EXPECT_EQ(after.torsion.log - before.torsion.log, surgery_factor(c, g, cap).log) << "d=" << d << " g=" << g;
        LabeledPresentation p = one_loop_presentation(c, base);
        auto labels = solve_labels(p, cap);
        Series one = Series::one(2 * g, cap);
        for (int i = 1; i <= d; ++i) {
          std::string s = std::to_string(i);
          EXPECT_EQ(labels[p.index_of("b" + s + "_3") - 1], one);
          EXPECT_EQ(labels[p.index_of("a" + s + "_1") - 1], one);
        }
      }
}

TEST(OneLoop, OracleOnMappingCylinderBase) {
  std::mt19937_64 rng(65);
  for (int d = 1; d <= 2; ++d) {
    const int cap = d + 2;
    LabeledPresentation base = mapping_cylinder(random_torelli_words(rng, 1, 2), 1);
    OneLoopClasper c = random_clasper(rng, d, 1);
    CylinderInvariant after = torsion(one_loop_presentation(c, base), cap);
    EXPECT_EQ(after.torsion.log - torsion(base, cap).torsion.log, surgery_factor(c, 1, cap).log);
  }
}

TEST(OneLoop, AlphaDIsPsiLeading) {
  for (int d = 1; d <= 4; ++d) {
    std::vector<int> ks;
    for (int i = 0; i < d; ++i) ks.push_back(1 + (i * 3) % 4);
    OneLoopClasper c = basis_clasper(ks);
    std::vector<Series> xs;
    for (int k : ks) xs.push_back(x(4, d, k));
    EXPECT_EQ(alpha_d(one_loop_presentation(c, 2), d), psi_leading(xs)) << "d=" << d;
  }
}

TEST(Theta, TorsionUnchanged) {
  std::mt19937_64 rng(66);
  for (int g = 1; g <= 2; ++g)
    for (int trial = 0; trial < 2; ++trial) {
      const int cap = 4;
      LabeledPresentation p = theta_presentation(g, random_word(rng, 2 * g, 3), random_word(rng, 2 * g, 3));
      EXPECT_EQ(p.num_generators() - p.reference_rank() - 2 * g, 14);
      CylinderInvariant inv = torsion(p, cap);
      EXPECT_EQ(inv.torsion.det_eps, 1);
      EXPECT_TRUE(inv.torsion.log.is_zero());
    }
}
