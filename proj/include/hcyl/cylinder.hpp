#pragma once

// Homology cylinders given by balanced presentations whose generators split into
// a reference basis (the bottom surface), the top surface and extra generators.
// Labels identify every generator with a series through the bottom inclusion;
// torsion is the log-determinant of the evaluated Fox matrix, Euler-normalized
// so that its degree-1 part is -1/2 of the contracted first Johnson map.
//
// Full (ungraded) torsion values are relative to the Magnus expansion in use,
// which defaults to the standard one gamma_i -> 1 + x_i.

#include <optional>
#include <string>
#include <vector>

#include "hcyl/cyclic_words.hpp"
#include "hcyl/errors.hpp"
#include "hcyl/johnson_es.hpp"
#include "hcyl/k1_ldet.hpp"
#include "hcyl/linear_algebra.hpp"
#include "hcyl/tensor_series.hpp"
#include "hcyl/word_ring.hpp"

namespace hcyl {

struct LabeledPresentation {
  int genus = 1;
  std::vector<std::string> minus;  // reference basis, in order
  std::vector<std::string> plus;   // top basis, in order
  std::vector<std::string> extra;
  std::vector<GroupWord> relators;  // letters index generators() (1-based)
  std::optional<std::vector<Series>> labels;
  bool declared_torelli = false;  // set by mapping_cylinder: torsion then insists on Torelli

  std::vector<std::string> generators() const {
    std::vector<std::string> g = minus;
    g.insert(g.end(), plus.begin(), plus.end());
    g.insert(g.end(), extra.begin(), extra.end());
    return g;
  }
  int num_generators() const { return static_cast<int>(minus.size() + plus.size() + extra.size()); }
  int reference_rank() const { return static_cast<int>(minus.size()); }
  // 1-based generator indices
  int minus_index(int i) const { return i + 1; }
  int plus_index(int i) const { return static_cast<int>(minus.size()) + i + 1; }
  int extra_index(int i) const { return static_cast<int>(minus.size() + plus.size()) + i + 1; }

  int index_of(const std::string& name) const {
    auto g = generators();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] == name) return static_cast<int>(i) + 1;
    return 0;
  }

  GroupWord word(const std::string& text) const { return parse_word(text, table_names(generators())); }
  void add_relator(const std::string& text) { relators.push_back(word(text)); }
};

namespace detail {

inline RationalMatrix exponent_matrix(const LabeledPresentation& p) {
  RationalMatrix e(static_cast<int>(p.relators.size()), p.num_generators());
  for (std::size_t j = 0; j < p.relators.size(); ++j)
    for (int a : p.relators[j].letters()) e(static_cast<int>(j), std::abs(a) - 1) += a > 0 ? 1 : -1;
  return e;
}

inline Series evaluate_word(const GroupWord& w, const std::vector<Series>& labels, const std::vector<Series>& inverses,
                            int max_degree) {
  Series out = Series::one(labels.front().rank(), labels.front().cap());
  for (int a : w.letters()) {
    const Series& f = a > 0 ? labels[a - 1] : inverses[-a - 1];
    out = Series::multiply(out, f, max_degree);
  }
  return out;
}

inline std::vector<Series> invert_all(const std::vector<Series>& labels) {
  std::vector<Series> inv;
  inv.reserve(labels.size());
  for (const auto& s : labels) inv.push_back(series_invert(s));
  return inv;
}

inline void check_balanced(const LabeledPresentation& p) {
  const int unknowns = p.num_generators() - p.reference_rank();
  if (static_cast<int>(p.relators.size()) != unknowns)
    throw PreconditionViolated("presentation is not balanced: " + std::to_string(p.relators.size()) + " relators for " +
                               std::to_string(unknowns) + " unknown generators");
  for (const auto& r : p.relators)
    if (r.max_index() > p.num_generators()) throw PreconditionViolated("relator uses an undeclared generator");
}

}  // namespace detail

// Every relator evaluates to 1 at the labels' cap.
inline bool labels_satisfy(const LabeledPresentation& p, const std::vector<Series>& labels) {
  auto inv = detail::invert_all(labels);
  const int cap = labels.front().cap();
  Series one = Series::one(labels.front().rank(), cap);
  for (const auto& r : p.relators)
    if (detail::evaluate_word(r, labels, inv, cap) != one) return false;
  return true;
}

inline std::vector<Series> solve_labels(const LabeledPresentation& p, int cap, const MagnusExpansion& theta) {
  detail::check_balanced(p);
  const int n = p.num_generators();
  const int rank = p.reference_rank();
  if (theta.rank() != rank) throw RankMismatch("expansion rank differs from the reference basis");
  if (theta.cap() < cap) throw TruncationMismatch("expansion cap below requested cap");
  const MagnusExpansion th = theta.cap() == cap ? theta : theta.truncated(cap);
  const int unknowns = n - rank;

  RationalMatrix e = detail::exponent_matrix(p);
  RationalMatrix e_unk(unknowns, unknowns);
  for (int j = 0; j < unknowns; ++j)
    for (int g = 0; g < unknowns; ++g) e_unk(j, g) = e(j, rank + g);
  auto e_inv = inverse(e_unk);
  if (!e_inv) throw NotAHomologyCylinder("abelianized relation matrix on the unknown generators is singular");

  std::vector<Series> labels;
  for (int i = 1; i <= rank; ++i) labels.push_back(th.image(i));

  // degree one: e_unk X = -e_ref
  RationalMatrix rhs(unknowns, rank);
  for (int j = 0; j < unknowns; ++j)
    for (int i = 0; i < rank; ++i) rhs(j, i) = -e(j, i);
  RationalMatrix x = *e_inv * rhs;
  for (int g = 0; g < unknowns; ++g) {
    Series s = Series::one(rank, cap);
    for (int i = 0; i < rank; ++i)
      if (x(g, i) != 0) s += Series::generator(rank, cap, i, x(g, i));
    labels.push_back(std::move(s));
  }

  for (int k = 2; k <= cap; ++k) {
    std::vector<Series> low;
    for (const auto& s : labels) low.push_back(s.truncated(k));
    auto inv = detail::invert_all(low);
    std::map<MonoKey, std::vector<Rational>> residual;  // monomial -> per-relator coefficient
    for (int j = 0; j < unknowns; ++j) {
      Series v = detail::evaluate_word(p.relators[j], low, inv, k) - Series::one(rank, k);
      int l = v.lowest_degree();
      if (l >= 0 && l < k) throw InconsistentRelators("relator " + std::to_string(j + 1) + " has a residual below degree " + std::to_string(k));
      for (const auto& t : v.stratum(k)) {
        auto& vec = residual[t.key];
        if (vec.empty()) vec.assign(unknowns, 0);
        vec[j] = t.coeff;
      }
    }
    for (const auto& [key, b] : residual) {
      for (int g = 0; g < unknowns; ++g) {
        Rational c = 0;
        for (int j = 0; j < unknowns; ++j)
          if (b[j] != 0 && (*e_inv)(g, j) != 0) c -= (*e_inv)(g, j) * b[j];
        if (c != 0) labels[rank + g].add_term(k, key, c);
      }
    }
  }
  return labels;
}

inline std::vector<Series> solve_labels(const LabeledPresentation& p, int cap) {
  return solve_labels(p, cap, MagnusExpansion::standard(p.reference_rank(), cap));
}

// Labels supplied with the presentation if valid at this cap, else solved.
inline std::vector<Series> labels_for(const LabeledPresentation& p, int cap, const MagnusExpansion& theta) {
  if (p.labels && !p.labels->empty() && p.labels->front().cap() >= cap) {
    std::vector<Series> given;
    for (const auto& s : *p.labels) given.push_back(s.truncated(cap));
    for (int i = 0; i < p.reference_rank(); ++i)
      if (given.at(i) != theta.truncated(cap).image(i + 1))
        throw InconsistentRelators("supplied label of " + p.minus[i] + " is not theta of the basis element");
    if (!labels_satisfy(p, given)) throw InconsistentRelators("supplied labels do not satisfy the relators");
    return given;
  }
  return solve_labels(p, cap, theta);
}

inline ExpansionAuto sigma_from_labels(const LabeledPresentation& p, const std::vector<Series>& labels,
                                       const MagnusExpansion& theta) {
  if (p.plus.size() != p.minus.size()) throw PreconditionViolated("top and bottom bases differ in size");
  std::vector<Series> u;
  for (std::size_t i = 0; i < p.plus.size(); ++i) u.push_back(labels.at(p.plus_index(static_cast<int>(i)) - 1));
  ExpansionAuto U(std::move(u));
  if (theta.is_standard()) return U;
  const int cap = labels.front().cap();
  MagnusExpansion th = theta.cap() == cap ? theta : theta.truncated(cap);
  std::vector<Series> e;
  for (int i = 1; i <= th.rank(); ++i) e.push_back(th.image(i));
  return auto_compose(U, auto_invert(ExpansionAuto(std::move(e))));
}

inline ExpansionAuto sigma_of(const LabeledPresentation& p, int cap) {
  MagnusExpansion theta = MagnusExpansion::standard(p.reference_rank(), cap);
  return sigma_from_labels(p, labels_for(p, cap, theta), theta);
}

// Rows: the listed generators; columns: relators; entry bar(d r_j / d g) under the labels.
inline SeriesMatrix evaluated_fox_block(const LabeledPresentation& p, const std::vector<Series>& labels,
                                        const std::vector<int>& gens) {
  const int rank = labels.front().rank();
  const int cap = labels.front().cap();
  auto inv = detail::invert_all(labels);
  std::vector<int> row_of(p.num_generators() + 1, -1);
  for (std::size_t i = 0; i < gens.size(); ++i) row_of.at(gens[i]) = static_cast<int>(i);
  SeriesMatrix m(static_cast<int>(gens.size()), static_cast<int>(p.relators.size()), rank, cap);
  for (std::size_t j = 0; j < p.relators.size(); ++j) {
    Series prefix_inv = Series::one(rank, cap);  // labels(prefix)^-1
    for (int a : p.relators[j].letters()) {
      int g = std::abs(a);
      int row = row_of[g];
      if (a > 0) {
        if (row >= 0) m(row, static_cast<int>(j)) += prefix_inv;
        prefix_inv = inv[g - 1] * prefix_inv;
      } else {
        prefix_inv = labels[g - 1] * prefix_inv;
        if (row >= 0) m(row, static_cast<int>(j)) -= prefix_inv;
      }
    }
  }
  return m;
}

inline std::vector<int> unknown_generators(const LabeledPresentation& p) {
  std::vector<int> g;
  for (int i = p.reference_rank() + 1; i <= p.num_generators(); ++i) g.push_back(i);
  return g;
}

struct CylinderInvariant {
  K1Value torsion;
  K1Value raw;                     // ldet before normalization (after the sign fix)
  ExpansionAuto sigma;
  std::optional<HomDerivation> tau1;  // present for Torelli cylinders
  std::vector<Integer> euler_shift;    // h, for Torelli cylinders
  bool defined_mod_h = false;
};

// Cyclic log of theta(gamma_1^{h_1} ... gamma_n^{h_n}).
inline CyclicSeries homology_log(const std::vector<Integer>& h, const MagnusExpansion& theta) {
  CyclicSeries out(theta.rank(), theta.cap());
  for (int i = 0; i < theta.rank(); ++i) {
    if (h[i] == 0) continue;
    CyclicSeries l = project_cyclic(series_log(theta.image(i + 1)));
    out += Rational(h[i]) * l;
  }
  return out;
}

inline CylinderInvariant torsion(const LabeledPresentation& p, int cap, const MagnusExpansion& theta) {
  if (cap < 1) throw PreconditionViolated("cap must be >= 1");
  if (static_cast<int>(p.minus.size()) != 2 * p.genus || p.plus.size() != p.minus.size())
    throw PreconditionViolated("cylinder presentation needs 2g bottom and 2g top generators");
  const int solve_cap = std::max(cap, 2);
  if (theta.cap() < solve_cap) throw TruncationMismatch("expansion cap below the torsion cap");
  MagnusExpansion th_solve = theta.cap() == solve_cap ? theta : theta.truncated(solve_cap);
  std::vector<Series> labels = labels_for(p, solve_cap, th_solve);

  CylinderInvariant out;
  ExpansionAuto sigma = sigma_from_labels(p, labels, th_solve);
  bool torelli = sigma.linear_part().is_identity();
  if (p.declared_torelli && !torelli) throw NotTorelli("the automorphism does not act trivially on homology");

  std::vector<Series> low;
  for (const auto& s : labels) low.push_back(s.truncated(cap));
  SeriesMatrix a = evaluated_fox_block(p, low, unknown_generators(p));
  Rational d = determinant(eps_matrix(a));
  if (d == 0) throw SingularAugmentation("augmented Fox matrix is singular");
  if (d < 0 && a.cols() >= 2) a.swap_columns(0, 1);
  out.raw = ldet(a);

  MagnusExpansion th = theta.cap() == cap ? theta : theta.truncated(cap);
  out.torsion = out.raw;
  if (torelli) {
    HomDerivation t1 = tau(sigma, 1);
    std::vector<Rational> c1 = contract_C1(t1);
    std::vector<Integer> h(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i) {
      Rational target = Rational(-1, 2) * c1[i];
      Rational hi = target - out.raw.log.coeff({static_cast<int>(i)});
      if (!is_integer(hi))
        throw NonIntegralEulerShift("Euler shift component " + std::to_string(i + 1) + " is " + to_string(hi));
      h[i] = hi.get_num();
    }
    out.torsion.log += homology_log(h, th);
    out.tau1 = t1;
    out.euler_shift = h;
  } else {
    out.defined_mod_h = true;
  }
  out.torsion.det_eps = 1;
  out.sigma = sigma.cap() == cap ? sigma : sigma.truncated(cap);
  return out;
}

inline CylinderInvariant torsion(const LabeledPresentation& p, int cap) {
  return torsion(p, cap, MagnusExpansion::standard(p.reference_rank(), std::max(cap, 2)));
}

// exp of the abelianized torsion against the commutative determinant of the
// same Fox block, with the Euler shift and det_eps normalization put back.
inline bool commutative_reduction_holds(const LabeledPresentation& p, int cap) {
  CylinderInvariant inv = torsion(p, cap);
  const int rank = p.reference_rank();
  SeriesMatrix a = evaluated_fox_block(p, solve_labels(p, cap), unknown_generators(p));
  if (determinant(eps_matrix(a)) < 0) a.swap_columns(0, 1);
  CommSeries normalized = comm_det(abelianize(a)) * CommSeries::constant(rank, cap, 1 / inv.raw.det_eps);
  for (int i = 0; i < rank && i < static_cast<int>(inv.euler_shift.size()); ++i)
    normalized = normalized * comm_pow(CommSeries::constant(rank, cap, 1) + CommSeries::variable(rank, cap, i),
                                       inv.euler_shift[i].get_si());
  return comm_exp(abelianize(inv.torsion.log)) == normalized;
}

inline CyclicSeries alpha_d(const LabeledPresentation& p, int d) {
  if (d < 1) throw PreconditionViolated("alpha_d needs d >= 1");
  CylinderInvariant inv = torsion(p, d);
  for (int k = 1; k < d; ++k)
    if (!inv.torsion.log.degree_part(k).is_zero())
      throw LowerDegreeNonzero("torsion has a nonzero degree-" + std::to_string(k) + " part");
  return inv.torsion.log.degree_part(d);
}

// ---------------------------------------------------------------------------

inline LabeledPresentation trivial_cylinder(int genus) {
  LabeledPresentation p;
  p.genus = genus;
  for (int i = 1; i <= 2 * genus; ++i) {
    p.minus.push_back("m" + std::to_string(i));
    p.plus.push_back("p" + std::to_string(i));
  }
  for (int i = 0; i < 2 * genus; ++i) p.relators.push_back(GroupWord({p.plus_index(i), -p.minus_index(i)}));
  return p;
}

// Rewrite a word over the surface basis g1..g2g in the bottom generators.
inline GroupWord in_minus_basis(const LabeledPresentation& p, const GroupWord& w) {
  std::vector<int> letters;
  for (int a : w.letters()) {
    int g = std::abs(a);
    if (g > p.reference_rank()) throw RankMismatch("surface word uses a generator beyond the basis");
    letters.push_back(a > 0 ? p.minus_index(g - 1) : -p.minus_index(g - 1));
  }
  return GroupWord(letters);
}

inline LabeledPresentation mapping_cylinder(const std::vector<GroupWord>& phi, int genus) {
  if (static_cast<int>(phi.size()) != 2 * genus) throw PreconditionViolated("need 2g image words");
  LabeledPresentation p = trivial_cylinder(genus);
  p.relators.clear();
  for (int j = 0; j < 2 * genus; ++j)
    p.relators.push_back(GroupWord::generator(p.plus_index(j)) * in_minus_basis(p, phi[j]).inverse());
  p.declared_torelli = true;
  return p;
}

namespace detail {

inline GroupWord remap(const GroupWord& w, const std::vector<int>& map) {
  std::vector<int> letters;
  for (int a : w.letters()) letters.push_back(a > 0 ? map.at(a) : -map.at(-a));
  return GroupWord(letters);
}

inline std::vector<std::string> prefixed(const std::string& pre, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) out.push_back(pre + n);
  return out;
}

}  // namespace detail

// Stacking: P's top glued to Q's bottom.
inline LabeledPresentation compose(const LabeledPresentation& p, const LabeledPresentation& q) {
  if (p.genus != q.genus) throw PreconditionViolated("compose needs equal genus");
  LabeledPresentation c;
  c.genus = p.genus;
  c.minus = detail::prefixed("a_", p.minus);
  c.plus = detail::prefixed("b_", q.plus);
  auto add = [&](const std::vector<std::string>& v) { c.extra.insert(c.extra.end(), v.begin(), v.end()); };
  add(detail::prefixed("a_", p.plus));
  add(detail::prefixed("a_", p.extra));
  add(detail::prefixed("b_", q.minus));
  add(detail::prefixed("b_", q.extra));

  std::vector<int> pm(p.num_generators() + 1), qm(q.num_generators() + 1);
  for (int i = 0; i < p.reference_rank(); ++i) pm[p.minus_index(i)] = c.index_of("a_" + p.minus[i]);
  for (std::size_t i = 0; i < p.plus.size(); ++i) pm[p.plus_index(static_cast<int>(i))] = c.index_of("a_" + p.plus[i]);
  for (std::size_t i = 0; i < p.extra.size(); ++i) pm[p.extra_index(static_cast<int>(i))] = c.index_of("a_" + p.extra[i]);
  for (int i = 0; i < q.reference_rank(); ++i) qm[q.minus_index(i)] = c.index_of("b_" + q.minus[i]);
  for (std::size_t i = 0; i < q.plus.size(); ++i) qm[q.plus_index(static_cast<int>(i))] = c.index_of("b_" + q.plus[i]);
  for (std::size_t i = 0; i < q.extra.size(); ++i) qm[q.extra_index(static_cast<int>(i))] = c.index_of("b_" + q.extra[i]);

  for (const auto& r : p.relators) c.relators.push_back(detail::remap(r, pm));
  for (const auto& r : q.relators) c.relators.push_back(detail::remap(r, qm));
  for (std::size_t j = 0; j < p.plus.size(); ++j)
    c.relators.push_back(GroupWord({pm[p.plus_index(static_cast<int>(j))], -qm[q.minus_index(static_cast<int>(j))]}));
  return c;
}

inline LabeledPresentation mirror(const LabeledPresentation& p) {
  LabeledPresentation m;
  m.genus = p.genus;
  m.minus = p.plus;
  m.plus = p.minus;
  m.extra = p.extra;
  const int r = p.reference_rank();
  const int s = static_cast<int>(p.plus.size());
  std::vector<int> map(p.num_generators() + 1);
  for (int i = 0; i < r; ++i) map[p.minus_index(i)] = s + i + 1;  // old bottom becomes new top
  for (int i = 0; i < s; ++i) map[p.plus_index(i)] = i + 1;
  for (std::size_t i = 0; i < p.extra.size(); ++i) map[p.extra_index(static_cast<int>(i))] = r + s + static_cast<int>(i) + 1;
  for (const auto& w : p.relators) m.relators.push_back(detail::remap(w, map));
  return m;
}

// r(M) = -C A^-1 [I; 0] with C the evaluated Fox block over the bottom generators.
inline SeriesMatrix magnus_rep(const LabeledPresentation& p, int cap, const MagnusExpansion& theta) {
  std::vector<Series> labels = labels_for(p, cap, theta.cap() == cap ? theta : theta.truncated(cap));
  SeriesMatrix a = evaluated_fox_block(p, labels, unknown_generators(p));
  std::vector<int> bottom;
  for (int i = 0; i < p.reference_rank(); ++i) bottom.push_back(p.minus_index(i));
  SeriesMatrix c = evaluated_fox_block(p, labels, bottom);
  SeriesMatrix ainv = matrix_invert(a);
  const int n = static_cast<int>(p.plus.size());
  SeriesMatrix sel(ainv.rows(), n, ainv.rank(), ainv.cap());
  for (int i = 0; i < ainv.rows(); ++i)
    for (int j = 0; j < n; ++j) sel(i, j) = ainv(i, j);
  return -(c * sel);
}

inline SeriesMatrix magnus_rep(const LabeledPresentation& p, int cap) {
  return magnus_rep(p, cap, MagnusExpansion::standard(p.reference_rank(), cap));
}

// Mag(phi) = Psi^-1 o phi o Psi o phi^-1 on H_1(Sigma, *; completed group ring),
// with Psi(e_i) = gamma_i^-1 - 1 and v = sum_i (theta(gamma_i) - 1) d_i(v).
// The left decomposition lowers degree by one, so the result has cap sigma.cap() - 1.
inline SeriesMatrix magnus_of_auto(const ExpansionAuto& sigma, const MagnusExpansion& theta) {
  const int n = sigma.rank();
  const int cap = sigma.cap();
  if (cap < 2) throw PreconditionViolated("magnus_of_auto needs cap >= 2");
  MagnusExpansion th = theta.cap() == cap ? theta : theta.truncated(cap);
  std::optional<ExpansionAuto> e, einv;
  if (!th.is_standard()) {
    std::vector<Series> imgs;
    for (int i = 1; i <= n; ++i) imgs.push_back(th.image(i));
    e = ExpansionAuto(std::move(imgs));
    einv = auto_invert(*e);
  }
  // left factor decomposition in the basis theta(gamma_i) - 1
  auto strip = [&](const Series& v, int i) {
    Series w = einv ? einv->apply(v) : v;
    Series out(n, cap);
    for (int d = 1; d <= cap; ++d)
      for (const auto& t : w.stratum(d))
        if (mono_letter(t.key, d, 0) == i) out.add_term(d - 1, t.key & ((MonoKey{1} << (kLetterBits * (d - 1))) - 1), t.coeff);
    return e ? e->apply(out) : out;
  };
  SeriesMatrix m(n, n, n, cap);
  for (int j = 0; j < n; ++j) {
    Series image = sigma.apply(th.image(j + 1));
    Series v = series_invert(image) - Series::one(n, cap);
    for (int i = 0; i < n; ++i) m(i, j) = -(th.image(i + 1) * strip(v, i));
  }
  return m.truncated(cap - 1);
}

// ---------------------------------------------------------------------------
// Tietze moves.

// New extra generator z with relator z w^-1 (w over the existing generators).
inline LabeledPresentation tietze_add_generator(const LabeledPresentation& p, const GroupWord& w, const std::string& name) {
  LabeledPresentation q = p;
  q.extra.push_back(name);
  q.labels.reset();
  q.relators.push_back(GroupWord::generator(q.num_generators()) * w.inverse());
  return q;
}

// Replace relator j by g r_j g^-1 (g a signed generator index).
inline LabeledPresentation tietze_conjugate_relator(const LabeledPresentation& p, std::size_t j, int g) {
  LabeledPresentation q = p;
  q.labels.reset();
  GroupWord c = GroupWord::generator(g);
  q.relators.at(j) = c * q.relators[j] * c.inverse();
  return q;
}

// Replace relator j by r_j r_k.
inline LabeledPresentation tietze_multiply_relators(const LabeledPresentation& p, std::size_t j, std::size_t k) {
  LabeledPresentation q = p;
  q.labels.reset();
  q.relators.at(j) = q.relators[j] * q.relators.at(k);
  return q;
}

}  // namespace hcyl
