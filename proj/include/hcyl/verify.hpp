#pragma once

// Randomized property suites behind `hcyl verify`. Each check runs independent
// trials in a small thread pool; trial t draws from its own generator seeded by
// (seed, check name, t), so reports do not depend on the pool width.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hcyl/clasper.hpp"
#include "hcyl/cyclic_words.hpp"
#include "hcyl/cylinder.hpp"
#include "hcyl/johnson_es.hpp"
#include "hcyl/json_io.hpp"
#include "hcyl/k1_ldet.hpp"
#include "hcyl/random_inputs.hpp"
#include "hcyl/tensor_series.hpp"
#include "hcyl/word_ring.hpp"

namespace hcyl {

struct VerifyConfig {
  int cap = 4;
  int genus = 1;
  std::uint64_t seed = 0;
  int trials = 64;
  int jobs = 1;
};

struct TrialResult {
  std::optional<std::string> failure;
  std::map<std::string, int> tally;

  static TrialResult pass() { return {}; }
  static TrialResult fail(std::string why) { return {std::move(why), {}}; }
};

struct CheckReport {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::optional<std::string> counterexample;  // from the lowest failing trial
  std::map<std::string, int> tally;
  bool passed() const { return failures == 0; }
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckReport> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return true;
  }
};

using TrialFn = std::function<TrialResult(std::mt19937_64&, int)>;

inline std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

inline CheckReport run_check(const std::string& name, int trials, const VerifyConfig& cfg, const TrialFn& fn) {
  std::vector<TrialResult> results(trials);
  auto one = [&](int t) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(stable_hash(name)), static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    try {
      results[t] = fn(rng, t);
    } catch (const std::exception& e) {
      results[t] = TrialResult::fail(std::string("exception: ") + e.what());
    }
  };
  const int width = std::max(1, std::min(cfg.jobs, trials));
  if (width == 1) {
    for (int t = 0; t < trials; ++t) one(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < width; ++w)
      pool.emplace_back([&] {
        for (int t = next++; t < trials; t = next++) one(t);
      });
    for (auto& th : pool) th.join();
  }
  CheckReport report{name, trials, 0, std::nullopt, {}};
  for (int t = 0; t < trials; ++t) {
    if (results[t].failure) {
      ++report.failures;
      if (!report.counterexample) report.counterexample = "trial " + std::to_string(t) + ": " + *results[t].failure;
    }
    for (const auto& [k, v] : results[t].tally) report.tally[k] += v;
  }
  return report;
}

namespace verify_detail {

inline std::string words_text(const std::vector<GroupWord>& ws) {
  std::string out = "[";
  for (std::size_t i = 0; i < ws.size(); ++i) out += (i ? ", " : "") + format_word(ws[i]);
  return out + "]";
}

inline std::string clasper_text(const OneLoopClasper& c) {
  std::string out = "leaves " + words_text(c.leaves) + ", delta " + format_word(c.delta) + ", twists [";
  for (std::size_t i = 0; i < c.twists.size(); ++i) out += (i ? "," : "") + std::to_string(c.twists[i]);
  return out + "]";
}

inline TrialResult expect(bool ok, const std::string& what) { return ok ? TrialResult::pass() : TrialResult::fail(what); }

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// A cylinder from the families used by the torsion identities: a mapping cylinder
// of a Torelli automorphism or a 1-loop surgery on the trivial cylinder.
struct CylinderSample {
  LabeledPresentation presentation;
  std::string text;
};

inline CylinderSample sample_cylinder(std::mt19937_64& rng, int genus, bool allow_clasper = true) {
  if (allow_clasper && pick(rng, 0, 1) == 1) {
    OneLoopClasper c = random_clasper(rng, pick(rng, 1, 2), genus, 2);
    return {one_loop_presentation(c, genus), "1-loop clasper " + clasper_text(c)};
  }
  auto phi = random_torelli_words(rng, genus, 2);
  return {mapping_cylinder(phi, genus), "mapping cylinder of " + words_text(phi)};
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------

inline SuiteReport suite_fox(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"fox", {}};
  r.checks.push_back(run_check("fundamental formula w - 1 = sum (dw/dg_i)(g_i - 1)", cfg.trials, cfg, [](auto& rng, int) {
    int rank = 2 * pick(rng, 1, 3);
    GroupWord w = random_word(rng, rank, 12);
    RingElement rhs;
    for (int i = 1; i <= rank; ++i)
      rhs += fox_derivative(w, i) * (RingElement(GroupWord::generator(i)) - RingElement::scalar(1));
    return expect(RingElement(w) - RingElement::scalar(1) == rhs, "w = " + format_word(w));
  }));
  r.checks.push_back(run_check("product rule d(uv) = du + u dv", cfg.trials, cfg, [](auto& rng, int) {
    int rank = 2 * pick(rng, 1, 3);
    GroupWord u = random_word(rng, rank, 8), v = random_word(rng, rank, 8);
    for (int i = 1; i <= rank; ++i)
      if (fox_derivative(u * v, i) != fox_derivative(u, i) + RingElement(u) * fox_derivative(v, i))
        return TrialResult::fail("u = " + format_word(u) + ", v = " + format_word(v));
    return TrialResult::pass();
  }));
  r.checks.push_back(run_check("bar is an involutive anti-automorphism", cfg.trials, cfg, [](auto& rng, int) {
    RingElement a, b;
    for (int k = 0; k < 3; ++k) {
      a.add(random_word(rng, 4, 5), random_rational(rng));
      b.add(random_word(rng, 4, 5), random_rational(rng));
    }
    return expect(bar(bar(a)) == a && bar(a * b) == bar(b) * bar(a), "random ring elements");
  }));
  r.checks.push_back(run_check("format and parse round trip", cfg.trials, cfg, [](auto& rng, int) {
    GroupWord w = random_word(rng, 6, 12);
    return expect(parse_word(format_word(w)) == w, "w = " + format_word(w));
  }));
  r.checks.push_back(run_check("Magnus image of the fundamental formula", cfg.trials, cfg, [&](auto& rng, int) {
    int rank = 2 * pick(rng, 1, 2), cap = std::min(cfg.cap, 5);
    GroupWord w = random_word(rng, rank, 10);
    MagnusExpansion theta = MagnusExpansion::standard(rank, cap);
    Series rhs(rank, cap);
    for (int i = 1; i <= rank; ++i) rhs += theta.expand(fox_derivative(w, i)) * Series::generator(rank, cap, i - 1);
    return expect(theta.expand(w) - Series::one(rank, cap) == rhs, "w = " + format_word(w));
  }));
  return r;
}

inline SuiteReport suite_logexp(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"logexp", {}};
  const int cap = std::min(cfg.cap, 5);
  r.checks.push_back(run_check("exp and log are inverse", cfg.trials, cfg, [cap](auto& rng, int) {
    int rank = pick(rng, 2, 4);
    Series v = random_series(rng, rank, cap, 1, 2);
    Series u = Series::one(rank, cap) + random_series(rng, rank, cap, 1, 2);
    return expect(series_log(series_exp(v)) == v && series_exp(series_log(u)) == u, "random series");
  }));
  r.checks.push_back(run_check("cyclic log is additive on group elements", cfg.trials, cfg, [cap](auto& rng, int) {
    int rank = 2 * pick(rng, 1, 2);
    GroupWord u = random_word(rng, rank, 6), v = random_word(rng, rank, 6);
    MagnusExpansion theta = MagnusExpansion::standard(rank, cap);
    auto cl = [&](const GroupWord& w) { return project_cyclic(series_log(theta.expand(w))); };
    return expect(cl(u * v) == cl(u) + cl(v), "u = " + format_word(u) + ", v = " + format_word(v));
  }));
  r.checks.push_back(run_check("cyclic log depends only on the homology class", cfg.trials, cfg, [cap](auto& rng, int) {
    int rank = 2 * pick(rng, 1, 2);
    GroupWord w = random_word(rng, rank, 6), a = random_word(rng, rank, 3, 1), b = random_word(rng, rank, 3, 1);
    MagnusExpansion theta = MagnusExpansion::standard(rank, cap);
    auto cl = [&](const GroupWord& x) { return project_cyclic(series_log(theta.expand(x))); };
    return expect(cl(w * commutator(a, b)) == cl(w), "w = " + format_word(w));
  }));
  r.checks.push_back(run_check("Magnus expansion is multiplicative", cfg.trials, cfg, [cap](auto& rng, int) {
    int rank = 2 * pick(rng, 1, 3);
    GroupWord u = random_word(rng, rank, 8), v = random_word(rng, rank, 8);
    MagnusExpansion theta = MagnusExpansion::standard(rank, cap);
    return expect(theta.expand(u * v) == theta.expand(u) * theta.expand(v), "u = " + format_word(u) + ", v = " + format_word(v));
  }));
  r.checks.push_back(run_check("series inverse multiplies back", cfg.trials, cfg, [cap](auto& rng, int) {
    int rank = pick(rng, 1, 4);
    Series u = Series::constant(rank, cap, pick(rng, 1, 3)) + random_series(rng, rank, cap, 1, 2);
    Series inv = series_invert(u);
    return expect(u * inv == Series::one(rank, cap) && inv * u == Series::one(rank, cap), "random unit");
  }));
  r.checks.push_back(run_check("product is associative", cfg.trials, cfg, [cap](auto& rng, int) {
    Series a = random_series(rng, 3, cap, 0), b = random_series(rng, 3, cap, 0), c = random_series(rng, 3, cap, 0);
    return expect((a * b) * c == a * (b * c), "random series");
  }));
  return r;
}

inline SuiteReport suite_necklace(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"necklace", {}};
  r.checks.push_back(run_check("necklace count equals the number of rotation classes", 10, cfg, [](auto&, int t) {
    int g = 1 + t / 5, d = 1 + t % 5, n = 2 * g;
    Series all(n, d);
    std::vector<int> v(d, 0);
    while (true) {
      all.add_term(v, 1);
      int p = d - 1;
      while (p >= 0 && v[p] == n - 1) v[p--] = 0;
      if (p < 0) break;
      ++v[p];
    }
    auto classes = project_cyclic(all).stratum(d).size();
    return expect(Integer(static_cast<unsigned long>(classes)) == necklace_count(n, d),
                  "g = " + std::to_string(g) + ", d = " + std::to_string(d));
  }));
  r.checks.push_back(run_check("canonical form is the least rotation", cfg.trials, cfg, [](auto& rng, int) {
    int d = pick(rng, 1, 8);
    std::vector<int> w(d);
    for (int& a : w) a = pick(rng, 0, 3);
    std::vector<int> best = w, rot = w;
    for (int k = 0; k < d; ++k) {
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
      best = std::min(best, rot);
    }
    return expect(canonical_rotation(w) == best, "random word");
  }));
  r.checks.push_back(run_check("projection satisfies the trace property", cfg.trials, cfg, [&](auto& rng, int) {
    int cap = std::min(cfg.cap + 2, 6);
    Series a = random_series(rng, 3, cap, 1, 2).degree_part(pick(rng, 1, 3));
    Series b = random_series(rng, 3, cap, 1, 2).degree_part(pick(rng, 1, 3));
    return expect(project_cyclic(a * b) == project_cyclic(b * a), "random homogeneous pair");
  }));
  r.checks.push_back(run_check("reflection is an involution with p+ + p- = id", cfg.trials, cfg, [&](auto& rng, int) {
    CyclicSeries c = project_cyclic(random_series(rng, 4, std::min(cfg.cap + 1, 5), 1, 2));
    bool ok = rho(rho(c)) == c && p_plus(c) + p_minus(c) == c && rho(p_plus(c)) == p_plus(c) &&
              rho(p_minus(c)) == -p_minus(c) && p_minus(p_plus(c)).is_zero();
    return expect(ok, "random cyclic series");
  }));
  return r;
}

inline SuiteReport suite_ldet(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"ldet", {}};
  const int cap = std::min(cfg.cap, 4);
  r.checks.push_back(run_check("ldet(AB) = ldet(A) ldet(B)", cfg.trials, cfg, [cap](auto& rng, int) {
    int n = pick(rng, 1, 3);
    SeriesMatrix a = random_unit_matrix(rng, n, 2, cap), b = random_unit_matrix(rng, n, 2, cap);
    return expect(ldet(a * b) == ldet(a) * ldet(b), "N = " + std::to_string(n));
  }));
  r.checks.push_back(run_check("ldet is invariant under elementary matrices", cfg.trials, cfg, [cap](auto& rng, int) {
    int n = pick(rng, 2, 3);
    SeriesMatrix a = random_unit_matrix(rng, n, 2, cap);
    SeriesMatrix e = SeriesMatrix::identity(n, 2, cap);
    int i = pick(rng, 0, n - 1), j = (i + pick(rng, 1, n - 1)) % n;
    e(i, j) = random_series(rng, 2, cap, 0, 2);
    return expect(ldet(e * a) == ldet(a) && ldet(a * e) == ldet(a), "N = " + std::to_string(n));
  }));
  r.checks.push_back(run_check("matrix inverse multiplies back", cfg.trials, cfg, [cap](auto& rng, int) {
    int n = pick(rng, 1, 3);
    SeriesMatrix a = random_unit_matrix(rng, n, 2, cap);
    return expect(a * matrix_invert(a) == SeriesMatrix::identity(n, 2, cap), "N = " + std::to_string(n));
  }));
  r.checks.push_back(run_check("graded ldet equals the slice of ldet", cfg.trials, cfg, [cap](auto& rng, int) {
    int n = pick(rng, 1, 3), deg = pick(rng, 1, cap);
    SeriesMatrix a = SeriesMatrix::identity(n, 2, cap);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) += random_series(rng, 2, cap, deg, 2);
    return expect(ldet_graded(a, deg) == ldet(a).log.degree_part(deg), "N = " + std::to_string(n));
  }));
  r.checks.push_back(run_check("ldet separates A from its transpose", 1, cfg, [](auto&, int) {
    SeriesMatrix a(2, 3, 3);
    a(0, 0) = Series::one(3, 3) + Series::generator(3, 3, 0);
    a(0, 1) = Series::generator(3, 3, 1);
    a(1, 0) = Series::generator(3, 3, 2);
    a(1, 1) = Series::one(3, 3);
    return expect(ldet(a) != ldet(a.transpose()), "[[1+x1, x2], [x3, 1]]");
  }));
  return r;
}

inline SuiteReport suite_altprod(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"altprod", {}};
  for (int d = 1; d <= std::min(4, cfg.cap); ++d) {
    r.checks.push_back(run_check("delta_alt vanishes below degree " + std::to_string(d), cfg.trials, cfg, [d](auto& rng, int) {
      int n = pick(rng, 1, 3);
      std::vector<SeriesMatrix> as;
      for (int k = 0; k < d; ++k) as.push_back(random_augmentation_zero_matrix(rng, n, 2, d + 1));
      CyclicSeries v = delta_alt(as);
      TrialResult res;
      for (int k = 1; k <= d; ++k) {
        bool zero = v.degree_part(k).is_zero();
        res.tally["degree " + std::to_string(k) + " zero"] += zero;
        if (k < d && !zero && !res.failure) res.failure = "N = " + std::to_string(n) + ", degree " + std::to_string(k);
      }
      return res;
    }));
  }
  r.checks.push_back(run_check("alternating perturbations of a presentation matrix vanish below degree d", cfg.trials, cfg,
                               [](auto& rng, int) {
                                 int d = pick(rng, 1, 3), cap = d + 1;
                                 LabeledPresentation p = mapping_cylinder(random_torelli_words(rng, 1, 1), 1);
                                 SeriesMatrix a = evaluated_fox_block(p, solve_labels(p, cap), unknown_generators(p));
                                 std::vector<SeriesMatrix> ks;
                                 for (int k = 0; k < d; ++k) ks.push_back(random_augmentation_zero_matrix(rng, a.rows(), 2, cap));
                                 CyclicSeries alt(2, cap);
                                 for (unsigned mask = 0; mask < (1u << d); ++mask) {
                                   SeriesMatrix m = a;
                                   for (int k = 0; k < d; ++k)
                                     if (mask & (1u << k)) m += ks[k];
                                   CyclicSeries l = ldet(m).log;
                                   if (__builtin_popcount(mask) % 2) alt -= l;
                                   else alt += l;
                                 }
                                 for (int k = 1; k < d; ++k)
                                   if (!alt.degree_part(k).is_zero()) return TrialResult::fail("d = " + std::to_string(d));
                                 return TrialResult::pass();
                               }));
  return r;
}

inline SuiteReport suite_surgery_oracle(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"surgery-oracle", {}};
  r.checks.push_back(run_check("surgery factor equals the torsion difference of the compiled presentation", cfg.trials, cfg,
                               [](auto& rng, int) {
                                 int d = pick(rng, 1, 3), g = pick(rng, 1, 2), cap = d + 2;
                                 OneLoopClasper c = random_clasper(rng, d, g);
                                 LabeledPresentation base = trivial_cylinder(g);
                                 CylinderInvariant after = torsion(one_loop_presentation(c, base), cap);
                                 CylinderInvariant before = torsion(one_loop_presentation(c, base, false), cap);
                                 bool ok = after.torsion.log - before.torsion.log == surgery_factor(c, g, cap).log &&
                                           before.torsion == torsion(base, cap).torsion;
                                 return expect(ok, clasper_text(c));
                               }));
  r.checks.push_back(run_check("internal meridians and edge longitudes solve to 1", cfg.trials, cfg, [](auto& rng, int) {
    int d = pick(rng, 1, 3), g = pick(rng, 1, 2), cap = d + 2;
    OneLoopClasper c = random_clasper(rng, d, g);
    LabeledPresentation p = one_loop_presentation(c, g);
    auto labels = solve_labels(p, cap);
    Series one = Series::one(2 * g, cap);
    MagnusExpansion theta = MagnusExpansion::standard(2 * g, cap);
    for (int i = 1; i <= d; ++i) {
      std::string s = std::to_string(i);
      for (const char* n : {"a%_1", "a%_2", "a%_3", "b%_2", "b%_3"}) {
        std::string name = n;
        name.replace(1, 1, s);
        if (labels[p.index_of(name) - 1] != one) return TrialResult::fail(name + " for " + clasper_text(c));
      }
      if (labels[p.index_of("b" + s + "_1") - 1] != theta.expand(c.leaves[i - 1]))
        return TrialResult::fail("leaf longitude b" + s + "_1 for " + clasper_text(c));
    }
    return TrialResult::pass();
  }));
  r.checks.push_back(run_check("alpha_d of the basic 1-loop surgery equals psi_leading", cfg.trials, cfg, [](auto& rng, int) {
    int d = pick(rng, 1, 4), g = 2;
    std::vector<int> ks;
    std::vector<Series> xs;
    for (int i = 0; i < d; ++i) {
      ks.push_back(pick(rng, 1, 2 * g));
      xs.push_back(Series::generator(2 * g, d, ks.back() - 1));
    }
    OneLoopClasper c = basis_clasper(ks);
    return expect(alpha_d(one_loop_presentation(c, g), d) == psi_leading(xs), clasper_text(c));
  }));
  r.checks.push_back(run_check("1-loop leading values are reflection invariant (odd part zero)", cfg.trials, cfg,
                               [](auto& rng, int) {
                                 int d = pick(rng, 1, 4);
                                 std::vector<Series> xs;
                                 for (int i = 0; i < d; ++i) {
                                   Series v(4, d);
                                   for (int k = 0; k < 4; ++k) v.add_term({k}, random_rational(rng));
                                   xs.push_back(v);
                                 }
                                 CyclicSeries psi = psi_leading(xs);
                                 return expect(p_minus(psi).is_zero() && rho(p_plus(psi)) == p_plus(psi),
                                               "d = " + std::to_string(d));
                               }));
  r.checks.push_back(run_check("tree brackets are Lie and antisymmetric under child swap", cfg.trials, cfg, [](auto& rng, int) {
    const int rank = 4, cap = 4;
    auto leaf = [&] {
      Series v(rank, cap);
      for (int k = 0; k < rank; ++k) v.add_term({k}, random_rational(rng));
      return ClasperTree::make_leaf(v);
    };
    ClasperTree left = ClasperTree::node(leaf(), leaf()), right = leaf();
    int k = pick(rng, 0, 3);
    Series v = tree_bracket({ClasperTree::node(left, right), k});
    return expect(dynkin_is_lie(v) && tree_bracket({ClasperTree::node(right, left), k}) == -v, "random leaves");
  }));
  r.checks.push_back(run_check("Y-graph labels satisfy the commutator recursion", 1, cfg, [&](auto&, int) {
    const int cap = std::min(cfg.cap + 1, 6);
    LabeledPresentation p = y_presentation();
    auto labels = solve_labels(p, cap);
    MagnusExpansion theta = MagnusExpansion::standard(3, cap);
    auto L = [&](const char* n) { return labels[p.index_of(n) - 1]; };
    auto comm = [](const Series& u, const Series& v) { return u * v * series_invert(u) * series_invert(v); };
    std::vector<std::string> a{"a1", "a2", "a3"}, b{"b1", "b2", "b3"};
    for (int i = 0; i < 3; ++i) {
      Series b1 = L(b[(i + 1) % 3].c_str()), b2 = L(b[(i + 2) % 3].c_str()), a1 = L(a[(i + 1) % 3].c_str());
      Series rhs = comm(series_invert(b1), b2) * b2 * comm(series_invert(b1), a1) * series_invert(b2);
      if (L(a[i].c_str()) != rhs) return TrialResult::fail("alpha_" + std::to_string(i + 1));
    }
    return TrialResult::pass();
  }));
  return r;
}

inline SuiteReport suite_magnus(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"magnus", {}};
  const int cap = std::min(cfg.cap, 4);
  r.checks.push_back(run_check("r(M) of a mapping cylinder equals the Psi-route Magnus matrix", cfg.trials, cfg,
                               [cap](auto& rng, int) {
                                 int g = pick(rng, 1, 2);
                                 auto phi = random_torelli_words(rng, g, 2);
                                 ExpansionAuto s = auto_from_group_images(phi, MagnusExpansion::standard(2 * g, cap + 1));
                                 SeriesMatrix rm = magnus_rep(mapping_cylinder(phi, g), cap);
                                 return expect(eps_matrix(rm).is_identity() &&
                                                   rm == magnus_of_auto(s, MagnusExpansion::standard(2 * g, cap + 1)),
                                               words_text(phi));
                               }));
  r.checks.push_back(run_check("torsion-Magnus identity", cfg.trials, cfg, [cap](auto& rng, int) {
    int g = pick(rng, 1, 2);
    CylinderSample m = sample_cylinder(rng, g);
    CylinderInvariant inv = torsion(m.presentation, cap);
    CylinderInvariant bar = torsion(mirror(m.presentation), cap);
    CyclicSeries lhs = -inv.torsion.log + act_auto(inv.sigma, bar.torsion.log);
    return expect(lhs == ldet(magnus_rep(m.presentation, cap)).log, m.text);
  }));
  r.checks.push_back(run_check("trace of log Mag matches the Johnson trace in degree d", cfg.trials, cfg, [](auto& rng, int) {
    int d = pick(rng, 1, 3), g = pick(rng, 1, 2), c = d + 1;
    auto words = random_ia_words(rng, 2 * g, d + 1);
    ExpansionAuto s = auto_from_group_images(words, MagnusExpansion::standard(2 * g, c + 1));
    HomDerivation top{d, {}};
    for (const auto& v : log_derivation(s)) top.values.push_back(v.degree_part(d + 1).truncated(c));
    CyclicSeries rhs = ldet(magnus_of_auto(s, MagnusExpansion::standard(2 * g, c + 1))).log.degree_part(d);
    return expect(es_trace(top) == rhs, "d = " + std::to_string(d) + ", " + words_text(words));
  }));
  r.checks.push_back(run_check("tau_d is additive and Lie-valued", cfg.trials, cfg, [](auto& rng, int) {
    int d = pick(rng, 1, 3), rank = 2 * pick(rng, 1, 2), c = d + 1;
    auto a = auto_from_group_images(random_ia_words(rng, rank, d + 1), MagnusExpansion::standard(rank, c));
    auto b = auto_from_group_images(random_ia_words(rng, rank, d + 1), MagnusExpansion::standard(rank, c));
    HomDerivation ta = tau(a, d);
    bool ok = tau(auto_compose(a, b), d) == ta + tau(b, d);
    for (const auto& v : ta.values) ok = ok && dynkin_is_lie(v);
    return expect(ok, "d = " + std::to_string(d));
  }));
  r.checks.push_back(run_check("tau_d does not depend on the Magnus expansion", cfg.trials, cfg, [](auto& rng, int) {
    int d = pick(rng, 1, 2), rank = 2, c = d + 2;
    std::vector<Series> imgs;
    for (int i = 0; i < rank; ++i)
      imgs.push_back(Series::one(rank, c) + Series::generator(rank, c, i) + random_series(rng, rank, c, 2, 1));
    MagnusExpansion other = MagnusExpansion::from_images(imgs);
    auto words = random_ia_words(rng, rank, d + 1);
    ExpansionAuto s0 = auto_from_group_images(words, MagnusExpansion::standard(rank, c));
    ExpansionAuto s1 = auto_from_group_images(words, other);
    return expect(ia_degree(s0) == ia_degree(s1) && tau(s0, d) == tau(s1, d), words_text(words));
  }));
  r.checks.push_back(run_check("mirror inverts sigma", cfg.trials, cfg, [cap](auto& rng, int) {
    int g = pick(rng, 1, 2);
    auto phi = random_torelli_words(rng, g, 2);
    LabeledPresentation p = mapping_cylinder(phi, g);
    return expect(sigma_of(mirror(p), cap) == auto_invert(sigma_of(p, cap)), words_text(phi));
  }));
  return r;
}

inline SuiteReport suite_crossed(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"crossed", {}};
  const int cap = std::min(cfg.cap, 4);
  r.checks.push_back(run_check("torsion(P o Q) = torsion(P) + sigma_P(torsion(Q))", cfg.trials, cfg, [cap](auto& rng, int) {
    int g = pick(rng, 1, 2);
    CylinderSample p = sample_cylinder(rng, g), q = sample_cylinder(rng, g);
    CylinderInvariant ip = torsion(p.presentation, cap), iq = torsion(q.presentation, cap);
    CylinderInvariant ipq = torsion(compose(p.presentation, q.presentation), cap);
    return expect(ipq.torsion.log == ip.torsion.log + act_auto(ip.sigma, iq.torsion.log), p.text + " then " + q.text);
  }));
  r.checks.push_back(run_check("sigma of a composite is the composite of sigmas", cfg.trials, cfg, [cap](auto& rng, int) {
    int g = pick(rng, 1, 2);
    CylinderSample p = sample_cylinder(rng, g), q = sample_cylinder(rng, g);
    return expect(sigma_of(compose(p.presentation, q.presentation), cap) ==
                      auto_compose(sigma_of(p.presentation, cap), sigma_of(q.presentation, cap)),
                  p.text + " then " + q.text);
  }));
  r.checks.push_back(run_check("normalized torsion is invariant under Tietze moves", cfg.trials, cfg, [cap](auto& rng, int) {
    int g = pick(rng, 1, 2);
    CylinderSample m = sample_cylinder(rng, g);
    const LabeledPresentation& p = m.presentation;
    K1Value base = torsion(p, cap).torsion;
    GroupWord w = random_word(rng, p.num_generators(), 4);
    LabeledPresentation q = tietze_add_generator(p, w, "z_new");
    std::size_t j = pick(rng, 0, static_cast<int>(p.relators.size()) - 1);
    int gen = pick(rng, 1, p.num_generators()) * (pick(rng, 0, 1) ? 1 : -1);
    bool ok = torsion(q, cap).torsion == base && torsion(tietze_conjugate_relator(p, j, gen), cap).torsion == base;
    return expect(ok, m.text);
  }));
  r.checks.push_back(run_check("labels do not depend on the relator order", cfg.trials, cfg, [cap](auto& rng, int) {
    int g = pick(rng, 1, 2);
    CylinderSample m = sample_cylinder(rng, g);
    LabeledPresentation q = m.presentation;
    std::shuffle(q.relators.begin(), q.relators.end(), rng);
    return expect(solve_labels(q, cap) == solve_labels(m.presentation, cap), m.text);
  }));
  r.checks.push_back(run_check("degree-1 torsion is -1/2 of the contracted tau_1", cfg.trials, cfg, [cap](auto& rng, int) {
    int g = pick(rng, 1, 2);
    CylinderSample m = sample_cylinder(rng, g);
    CylinderInvariant inv = torsion(m.presentation, cap);
    if (!inv.tau1) return TrialResult::fail("no tau_1 for " + m.text);
    auto c1 = contract_C1(*inv.tau1);
    for (int i = 0; i < 2 * g; ++i)
      if (inv.torsion.log.coeff({i}) != Rational(-1, 2) * c1[i]) return TrialResult::fail(m.text);
    return TrialResult::pass();
  }));
  return r;
}

inline SuiteReport suite_abelian(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"abelian", {}};
  const int cap = std::min(cfg.cap, 4);
  r.checks.push_back(run_check("commutative determinant matches exp of the abelianized torsion", cfg.trials, cfg,
                               [cap](auto& rng, int) {
                                 int g = pick(rng, 1, 2);
                                 CylinderSample m = sample_cylinder(rng, g);
                                 return expect(commutative_reduction_holds(m.presentation, cap), m.text);
                               }));
  r.checks.push_back(run_check("exp(abelianized ldet) = commutative det", cfg.trials, cfg, [cap](auto& rng, int) {
    int n = pick(rng, 1, 3);
    SeriesMatrix a = random_unit_matrix(rng, n, 2, cap);
    K1Value v = ldet(a);
    return expect(v.det_eps * comm_exp(abelianize(v.log)) == comm_det(abelianize(a)), "N = " + std::to_string(n));
  }));
  return r;
}

inline SuiteReport suite_kloop(const VerifyConfig& cfg) {
  using namespace verify_detail;
  SuiteReport r{"kloop", {}};
  const int cap = std::min(cfg.cap, 4);
  r.checks.push_back(run_check("theta surgery leaves the torsion unchanged", cfg.trials, cfg, [cap](auto& rng, int) {
    int g = pick(rng, 1, 2);
    GroupWord d1 = random_word(rng, 2 * g, 3), d2 = random_word(rng, 2 * g, 3);
    CylinderInvariant inv = torsion(theta_presentation(g, d1, d2), cap);
    return expect(inv.torsion.det_eps == 1 && inv.torsion.log.is_zero(), "loops " + words_text({d1, d2}));
  }));
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"fox",           "logexp",  "necklace", "ldet",    "altprod",
                                              "surgery-oracle", "magnus", "crossed",  "abelian", "kloop"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg) {
  if (name == "fox") return suite_fox(cfg);
  if (name == "logexp") return suite_logexp(cfg);
  if (name == "necklace") return suite_necklace(cfg);
  if (name == "ldet") return suite_ldet(cfg);
  if (name == "altprod") return suite_altprod(cfg);
  if (name == "surgery-oracle") return suite_surgery_oracle(cfg);
  if (name == "magnus") return suite_magnus(cfg);
  if (name == "crossed") return suite_crossed(cfg);
  if (name == "abelian") return suite_abelian(cfg);
  if (name == "kloop") return suite_kloop(cfg);
  throw ParseError("unknown suite " + name);
}

inline Json to_json(const SuiteReport& s) {
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    Json j{{"identity", c.name}, {"status", c.passed() ? "PASS" : "FAIL"}, {"trials", c.trials}, {"failures", c.failures}};
    j["counterexample"] = c.counterexample ? Json(*c.counterexample) : Json(nullptr);
    if (!c.tally.empty()) j["tally"] = c.tally;
    checks.push_back(j);
  }
  return {{"suite", s.suite}, {"status", s.passed() ? "PASS" : "FAIL"}, {"checks", checks}};
}

}  // namespace hcyl
