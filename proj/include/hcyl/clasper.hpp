#pragma once

// Clasper data: tree brackets, the closed-form 1-loop surgery factor, and the
// presentations used to cross-check it through the torsion of a cylinder.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "hcyl/cyclic_words.hpp"
#include "hcyl/cylinder.hpp"
#include "hcyl/errors.hpp"
#include "hcyl/k1_ldet.hpp"
#include "hcyl/tensor_series.hpp"
#include "hcyl/word_ring.hpp"

namespace hcyl {

struct OneLoopClasper {
  int degree = 1;
  std::vector<GroupWord> leaves;  // gamma_1..gamma_d over g1..g2g
  GroupWord delta;
  std::vector<int> twists;  // epsilon_i in {0,1}

  int twist_parity() const {
    int e = 0;
    for (int t : twists) e += t;
    return e % 2;
  }
  void validate() const {
    if (degree < 1) throw PreconditionViolated("clasper degree must be >= 1");
    if (static_cast<int>(leaves.size()) != degree || static_cast<int>(twists.size()) != degree)
      throw PreconditionViolated("clasper needs one leaf word and one twist bit per degree");
    for (int t : twists)
      if (t != 0 && t != 1) throw PreconditionViolated("twist bits must be 0 or 1");
  }
};

struct ClasperTree {
  std::optional<Series> leaf;  // degree-1 homology vector at a leaf
  std::vector<ClasperTree> children;  // two, in the node's cyclic order

  static ClasperTree make_leaf(Series h) { return ClasperTree{std::move(h), {}}; }
  static ClasperTree node(ClasperTree left, ClasperTree right) {
    ClasperTree t;
    t.children.push_back(std::move(left));
    t.children.push_back(std::move(right));
    return t;
  }
};

struct TreeClasper {
  ClasperTree root;
  int twists = 0;
};

namespace detail {

inline Series bracket_of(const ClasperTree& t) {
  if (t.leaf) return *t.leaf;
  if (t.children.size() != 2) throw PreconditionViolated("tree clasper nodes need exactly two children");
  Series a = bracket_of(t.children[0]), b = bracket_of(t.children[1]);
  return a * b - b * a;
}

}  // namespace detail

inline Series tree_bracket(const TreeClasper& t) {
  if (t.root.leaf) throw PreconditionViolated("tree clasper needs at least two leaves");
  Series b = detail::bracket_of(t.root);
  return t.twists % 2 ? -b : b;
}

// F1 = theta(delta) + s prod_{i=1..d} (1 - theta(gamma_{d+1-i})),
// F2 = theta(delta)^-1 + s prod_{i=1..d} (1 - theta(gamma_i)^-1), s = (-1)^(eps+1).
inline K1Value surgery_factor(const OneLoopClasper& c, const MagnusExpansion& theta) {
  c.validate();
  const int rank = theta.rank(), cap = theta.cap();
  const Rational s = c.twist_parity() ? 1 : -1;
  Series one = Series::one(rank, cap);
  Series d = theta.expand(c.delta);
  Series p1 = one, p2 = one;
  for (int i = c.degree - 1; i >= 0; --i) p1 = p1 * (one - theta.expand(c.leaves[i]));
  for (int i = 0; i < c.degree; ++i) p2 = p2 * (one - theta.expand(c.leaves[i].inverse()));
  Series f1 = d + s * p1;
  Series f2 = series_invert(d) + s * p2;
  if (f1.constant_term() != 1 || f2.constant_term() != 1) throw NotAUnit("surgery factor has augmentation != 1");
  return {1, project_cyclic(series_log(f1)) + project_cyclic(series_log(f2))};
}

inline K1Value surgery_factor(const OneLoopClasper& c, int genus, int cap) {
  return surgery_factor(c, MagnusExpansion::standard(2 * genus, cap));
}

// -x1...xd - (-1)^d xd...x1
inline CyclicSeries psi_leading(const std::vector<Series>& xs) {
  if (xs.empty()) throw PreconditionViolated("psi_leading needs at least one vector");
  const int rank = xs.front().rank(), cap = xs.front().cap();
  if (cap < static_cast<int>(xs.size())) throw TruncationMismatch("cap below the number of vectors");
  Series fwd = Series::one(rank, cap), bwd = Series::one(rank, cap);
  for (const auto& x : xs) {
    if (!x.is_homogeneous_of(1)) throw NotHomogeneous("psi_leading inputs must be degree-1 vectors");
    fwd = fwd * x;
  }
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) bwd = bwd * *it;
  const Rational sign = xs.size() % 2 ? -1 : 1;
  return -project_cyclic(fwd) - sign * project_cyclic(bwd);
}

// Reverse the leaves; the diagram sign (-1)^(b1+1) is +1 for one loop.
inline OneLoopClasper clasper_mirror(const OneLoopClasper& c) {
  OneLoopClasper m = c;
  std::reverse(m.leaves.begin(), m.leaves.end());
  std::reverse(m.twists.begin(), m.twists.end());
  return m;
}

inline int clasper_mirror_sign(int first_betti) { return first_betti % 2 ? 1 : -1; }

// ---------------------------------------------------------------------------
// Presentations.

// Generators beta_1..3 (reference) and alpha_1..3 with the three Y relators.
inline LabeledPresentation y_presentation() {
  LabeledPresentation p;
  p.genus = 0;
  p.minus = {"b1", "b2", "b3"};
  p.extra = {"a1", "a2", "a3"};
  p.add_relator("a1 b3 a2 B2 A2 B3 b2");
  p.add_relator("a2 b1 a3 B3 A3 B1 b3");
  p.add_relator("a3 b2 a1 B1 A1 B2 b1");
  return p;
}

namespace detail {

inline std::string clasper_name(char kind, int i, int j) {
  return std::string(1, kind) + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace detail

// The base presentation with the generators alpha_{i,j}, beta_{i,j}, l of a 1-loop
// clasper neighborhood, relators r_{i,1..5}, and ties beta_{i,1} = gamma_i,
// l = delta in the base's bottom generators. Without surgery r_{i,1..3} become alpha_{i,j}.
inline LabeledPresentation one_loop_presentation(const OneLoopClasper& c, const LabeledPresentation& base,
                                                 bool surgered = true) {
  c.validate();
  const int d = c.degree;
  LabeledPresentation p = base;
  p.labels.reset();
  p.declared_torelli = false;
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= 3; ++j) {
      p.extra.push_back(detail::clasper_name('a', i, j));
      p.extra.push_back(detail::clasper_name('b', i, j));
    }
  p.extra.push_back("l");
  // base relators keep their indices: the new generators come after every old one
  auto g = [&](char kind, int i, int j) { return GroupWord::generator(p.index_of(detail::clasper_name(kind, i, j))); };
  auto inv = [](const GroupWord& w) { return w.inverse(); };
  GroupWord l = GroupWord::generator(p.index_of("l"));

  for (int i = 1; i <= d; ++i) {
    auto a = [&](int j) { return g('a', i, j); };
    auto b = [&](int j) { return g('b', i, j); };
    if (surgered) {
      p.relators.push_back(a(1) * b(3) * a(2) * inv(b(2)) * inv(a(2)) * inv(b(3)) * b(2));
      p.relators.push_back(a(2) * b(1) * a(3) * inv(b(3)) * inv(a(3)) * inv(b(1)) * b(3));
      p.relators.push_back(a(3) * b(2) * a(1) * inv(b(1)) * inv(a(1)) * inv(b(2)) * b(1));
    } else {
      for (int j = 1; j <= 3; ++j) p.relators.push_back(a(j));
    }
    const bool last = i == d;
    GroupWord next_b3 = last ? l * g('b', 1, 3) * inv(l) : g('b', i + 1, 3);
    GroupWord next_a3 = last ? l * g('a', 1, 3) * inv(l) : g('a', i + 1, 3);
    if (c.twists[i - 1] == 0) {
      p.relators.push_back(a(2) * next_b3);
      p.relators.push_back(b(2) * next_a3);
    } else {
      p.relators.push_back(inv(b(2)) * a(2) * b(2) * inv(next_b3));
      p.relators.push_back(inv(b(2)) * a(2) * b(2) * inv(a(2)) * b(2) * inv(next_a3));
    }
  }
  for (int i = 1; i <= d; ++i) p.relators.push_back(g('b', i, 1) * in_minus_basis(p, c.leaves[i - 1]).inverse());
  p.relators.push_back(l * in_minus_basis(p, c.delta).inverse());
  return p;
}

inline LabeledPresentation one_loop_presentation(const OneLoopClasper& c, int genus, bool surgered = true) {
  return one_loop_presentation(c, trivial_cylinder(genus), surgered);
}

// Two Y pieces joined by three edges, the second and third running around l1 and l2
// (tied to the bottom words delta1, delta2). No leaves.
inline LabeledPresentation theta_presentation(const LabeledPresentation& base, const GroupWord& delta1,
                                              const GroupWord& delta2) {
  LabeledPresentation p = base;
  p.labels.reset();
  p.declared_torelli = false;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 3; ++j) {
      p.extra.push_back(detail::clasper_name('a', i, j));
      p.extra.push_back(detail::clasper_name('b', i, j));
    }
  p.extra.push_back("l1");
  p.extra.push_back("l2");
  auto g = [&](char kind, int i, int j) { return GroupWord::generator(p.index_of(detail::clasper_name(kind, i, j))); };
  auto inv = [](const GroupWord& w) { return w.inverse(); };
  for (int i = 1; i <= 2; ++i) {
    auto a = [&](int j) { return g('a', i, j); };
    auto b = [&](int j) { return g('b', i, j); };
    p.relators.push_back(a(1) * b(3) * a(2) * inv(b(2)) * inv(a(2)) * inv(b(3)) * b(2));
    p.relators.push_back(a(2) * b(1) * a(3) * inv(b(3)) * inv(a(3)) * inv(b(1)) * b(3));
    p.relators.push_back(a(3) * b(2) * a(1) * inv(b(1)) * inv(a(1)) * inv(b(2)) * b(1));
  }
  GroupWord l1 = GroupWord::generator(p.index_of("l1"));
  GroupWord l2 = GroupWord::generator(p.index_of("l2"));
  struct Edge {
    int a, b;
    GroupWord loop;
  };
  for (const Edge& e : {Edge{1, 1, GroupWord()}, Edge{2, 3, l1}, Edge{3, 2, l2}}) {
    p.relators.push_back(g('a', 1, e.a) * e.loop * g('b', 2, e.b) * inv(e.loop));
    p.relators.push_back(g('b', 1, e.a) * e.loop * g('a', 2, e.b) * inv(e.loop));
  }
  p.relators.push_back(l1 * in_minus_basis(p, delta1).inverse());
  p.relators.push_back(l2 * in_minus_basis(p, delta2).inverse());
  return p;
}

inline LabeledPresentation theta_presentation(int genus, const GroupWord& delta1, const GroupWord& delta2) {
  return theta_presentation(trivial_cylinder(genus), delta1, delta2);
}

}  // namespace hcyl
