#pragma once

// Random generators shared by the property suites and the tests.

#include <random>
#include <vector>

#include "hcyl/clasper.hpp"
#include "hcyl/k1_ldet.hpp"
#include "hcyl/linear_algebra.hpp"
#include "hcyl/tensor_series.hpp"
#include "hcyl/word_ring.hpp"

namespace hcyl {

inline GroupWord random_word(std::mt19937_64& rng, int rank, int max_len, int min_len = 0) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::bernoulli_distribution inv(0.5);
  std::vector<int> letters;
  int n = len(rng);
  for (int i = 0; i < n; ++i) letters.push_back(inv(rng) ? -gen(rng) : gen(rng));
  return GroupWord(letters);
}

// Nontrivial reduced word avoiding one generator (0 avoids nothing).
inline GroupWord random_word_avoiding(std::mt19937_64& rng, int rank, int avoid, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::bernoulli_distribution inv(0.5);
  while (true) {
    std::vector<int> letters;
    int n = len(rng);
    while (static_cast<int>(letters.size()) < n) {
      int a = gen(rng);
      if (a == avoid) continue;
      letters.push_back(inv(rng) ? -a : a);
    }
    GroupWord w(letters);
    if (!w.is_identity()) return w;
  }
}

inline Rational random_rational(std::mt19937_64& rng, int bound = 3) {
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, 3);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// Random series whose terms start in degree `low`.
inline Series random_series(std::mt19937_64& rng, int rank, int cap, int low, int terms_per_degree = 3) {
  Series s(rank, cap);
  std::uniform_int_distribution<int> letter(0, rank - 1);
  for (int d = low; d <= cap; ++d)
    for (int t = 0; t < terms_per_degree; ++t) {
      std::vector<int> m(d);
      for (int& a : m) a = letter(rng);
      s.add_term(m, random_rational(rng));
    }
  return s;
}

// Square matrix with invertible augmentation.
inline SeriesMatrix random_unit_matrix(std::mt19937_64& rng, int n, int rank, int cap) {
  std::uniform_int_distribution<int> small(-2, 2);
  while (true) {
    SeriesMatrix m(n, rank, cap);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = Series::constant(rank, cap, small(rng)) + random_series(rng, rank, cap, 1, 2);
    if (determinant(eps_matrix(m)) != 0) return m;
  }
}

inline SeriesMatrix random_augmentation_zero_matrix(std::mt19937_64& rng, int n, int rank, int cap) {
  SeriesMatrix m(n, rank, cap);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = random_series(rng, rank, cap, 1, 2);
  return m;
}

// Substitute images into w: phi(w).
inline GroupWord substitute(const GroupWord& w, const std::vector<GroupWord>& images) {
  GroupWord out;
  for (int a : w.letters()) out = out * (a > 0 ? images.at(a - 1) : images.at(-a - 1).inverse());
  return out;
}

// (phi o psi)(g) = phi(psi(g)).
inline std::vector<GroupWord> compose_words(const std::vector<GroupWord>& phi, const std::vector<GroupWord>& psi) {
  std::vector<GroupWord> out;
  for (const auto& w : psi) out.push_back(substitute(w, phi));
  return out;
}

// Product of elementary IA automorphisms of the free group of rank 2g whose first
// Johnson image has even contraction, so the Euler shift is integral:
// conjugations g_i -> v^2 g_i v^-2 and, in rank >= 3, g_i -> g_i [a,b]^2 or
// g_i -> g_i [[a,b],c] with a, b, c avoiding g_i.
inline std::vector<GroupWord> random_torelli_words(std::mt19937_64& rng, int genus, int steps) {
  const int rank = 2 * genus;
  std::vector<GroupWord> phi;
  for (int i = 1; i <= rank; ++i) phi.push_back(GroupWord::generator(i));
  std::uniform_int_distribution<int> gen(1, rank);
  std::uniform_int_distribution<int> kind(0, rank >= 3 ? 2 : 0);
  for (int s = 0; s < steps; ++s) {
    int i = gen(rng);
    std::vector<GroupWord> e;
    for (int k = 1; k <= rank; ++k) e.push_back(GroupWord::generator(k));
    GroupWord gi = GroupWord::generator(i);
    switch (kind(rng)) {
      case 0: {
        GroupWord v = random_word_avoiding(rng, rank, i, 2);
        e[i - 1] = v * v * gi * (v * v).inverse();
        break;
      }
      case 1: {
        GroupWord c = commutator(random_word_avoiding(rng, rank, i, 2), random_word_avoiding(rng, rank, i, 2));
        e[i - 1] = gi * c * c;
        break;
      }
      default: {
        GroupWord c = commutator(commutator(random_word_avoiding(rng, rank, i, 2), random_word_avoiding(rng, rank, i, 2)),
                                 random_word_avoiding(rng, rank, i, 2));
        e[i - 1] = gi * c;
        break;
      }
    }
    phi = compose_words(phi, e);
  }
  return phi;
}

// g_i -> g_i c_i with c_i a left-normed commutator of the given weight (an IA endomorphism
// whose Magnus image lies in the Johnson filtration at depth weight - 1).
inline std::vector<GroupWord> random_ia_words(std::mt19937_64& rng, int rank, int weight) {
  std::vector<GroupWord> out;
  std::bernoulli_distribution skip(0.3);
  for (int i = 1; i <= rank; ++i) {
    GroupWord c = random_word(rng, rank, 2, 1);
    for (int k = 1; k < weight; ++k) c = commutator(c, random_word(rng, rank, 2, 1));
    out.push_back(skip(rng) ? GroupWord::generator(i) : GroupWord::generator(i) * c);
  }
  return out;
}

inline OneLoopClasper random_clasper(std::mt19937_64& rng, int degree, int genus, int max_len = 3) {
  OneLoopClasper c;
  c.degree = degree;
  std::bernoulli_distribution bit(0.5);
  for (int i = 0; i < degree; ++i) {
    c.leaves.push_back(random_word(rng, 2 * genus, max_len, 1));
    c.twists.push_back(bit(rng));
  }
  c.delta = random_word(rng, 2 * genus, max_len);
  return c;
}

// Leaves are the basis elements g_{k_1}, ..., g_{k_d}; no twists, trivial path.
inline OneLoopClasper basis_clasper(const std::vector<int>& ks) {
  OneLoopClasper c;
  c.degree = static_cast<int>(ks.size());
  for (int k : ks) c.leaves.push_back(GroupWord::generator(k));
  c.twists.assign(ks.size(), 0);
  return c;
}

}  // namespace hcyl
