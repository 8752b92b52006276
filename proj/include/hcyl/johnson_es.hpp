#pragma once

// Filtration-preserving algebra automorphisms of the truncated tensor algebra,
// Johnson homomorphisms, the intersection-form duality and the trace Tr_d.
//
// An ExpansionAuto is stored by the images 1 + phi(x_i). For the standard
// Magnus expansion these are the series theta(sigma(gamma_i)); for another
// expansion theta' the transported automorphism is built by
// auto_from_group_images as U o E^-1, where U substitutes x_i -> theta'(sigma(gamma_i)) - 1
// and E substitutes x_i -> theta'(gamma_i) - 1.

#include <optional>
#include <vector>

#include "hcyl/cyclic_words.hpp"
#include "hcyl/errors.hpp"
#include "hcyl/linear_algebra.hpp"
#include "hcyl/tensor_series.hpp"
#include "hcyl/word_ring.hpp"

namespace hcyl {

class ExpansionAuto {
 public:
  ExpansionAuto() = default;
  explicit ExpansionAuto(std::vector<Series> images) : images_(std::move(images)) {
    if (images_.empty()) throw PreconditionViolated("automorphism needs at least one generator");
    const int rank = images_[0].rank();
    const int cap = images_[0].cap();
    if (static_cast<int>(images_.size()) != rank)
      throw PreconditionViolated("automorphism needs one image per generator");
    for (const auto& s : images_) {
      if (s.cap() != cap) throw TruncationMismatch("automorphism images disagree on cap");
      if (s.rank() != rank) throw RankMismatch("automorphism images disagree on rank");
      if (s.constant_term() != 1) throw BadAugmentation("automorphism images need constant term 1");
    }
    for (const auto& s : images_) shifted_.push_back(s.without_constant());
  }

  static ExpansionAuto identity(int rank, int cap) {
    std::vector<Series> imgs;
    for (int i = 0; i < rank; ++i) imgs.push_back(Series::one(rank, cap) + Series::generator(rank, cap, i));
    return ExpansionAuto(std::move(imgs));
  }

  int rank() const { return static_cast<int>(images_.size()); }
  int cap() const { return images_.front().cap(); }
  // 0-based
  const Series& image(int i) const { return images_.at(i); }
  const std::vector<Series>& images() const { return images_; }

  // The algebra map x_i -> image_i - 1 applied to s.
  Series apply(const Series& s) const {
    if (s.rank() != rank()) throw RankMismatch("substitution rank differs");
    if (s.cap() != cap()) throw TruncationMismatch("substitution cap differs");
    struct Item {
      std::vector<int> letters;
      const Rational* coeff;
    };
    std::vector<Item> items;
    s.for_each_term([&](int d, MonoKey k, const Rational& c) { items.push_back({unpack_mono(k, d), &c}); });
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.letters < b.letters; });
    Series out(rank(), cap());
    std::vector<Series> stack{Series::one(rank(), cap())};
    std::vector<int> prefix;
    for (const auto& item : items) {
      std::size_t common = 0;
      while (common < prefix.size() && common < item.letters.size() && prefix[common] == item.letters[common]) ++common;
      prefix.resize(common);
      stack.resize(common + 1);
      for (std::size_t t = common; t < item.letters.size(); ++t) {
        int a = item.letters[t];
        stack.push_back(stack.back() * shifted_[a]);
        prefix.push_back(a);
      }
      out += *item.coeff * stack.back();
    }
    return out;
  }

  // entry (j, i) = coefficient of x_j in image_i
  RationalMatrix linear_part() const {
    RationalMatrix m(rank(), rank());
    for (int i = 0; i < rank(); ++i)
      for (const auto& t : images_[i].stratum(1)) m(static_cast<int>(t.key), i) = t.coeff;
    return m;
  }

  ExpansionAuto truncated(int new_cap) const {
    std::vector<Series> imgs;
    for (const auto& s : images_) imgs.push_back(s.truncated(new_cap));
    return ExpansionAuto(std::move(imgs));
  }

  bool operator==(const ExpansionAuto& o) const { return images_ == o.images_; }
  bool operator!=(const ExpansionAuto& o) const { return !(*this == o); }

 private:
  std::vector<Series> images_;
  std::vector<Series> shifted_;
};

// (sigma o tau)(x) = sigma(tau(x))
inline ExpansionAuto auto_compose(const ExpansionAuto& sigma, const ExpansionAuto& tau) {
  if (sigma.cap() != tau.cap()) throw TruncationMismatch("auto_compose caps differ");
  if (sigma.rank() != tau.rank()) throw RankMismatch("auto_compose ranks differ");
  std::vector<Series> imgs;
  for (int i = 0; i < tau.rank(); ++i) imgs.push_back(sigma.apply(tau.image(i)));
  return ExpansionAuto(std::move(imgs));
}

inline ExpansionAuto linear_auto(const RationalMatrix& m, int rank, int cap) {
  std::vector<Series> imgs;
  for (int i = 0; i < rank; ++i) {
    Series s = Series::one(rank, cap);
    for (int j = 0; j < rank; ++j)
      if (m(j, i) != 0) s += Series::generator(rank, cap, j, m(j, i));
    imgs.push_back(std::move(s));
  }
  return ExpansionAuto(std::move(imgs));
}

inline ExpansionAuto auto_invert(const ExpansionAuto& sigma) {
  const int n = sigma.rank();
  const int cap = sigma.cap();
  auto linv = inverse(sigma.linear_part());
  if (!linv) throw DegreeOnePartSingular("degree-one part of the automorphism is singular");
  ExpansionAuto lin = linear_auto(*linv, n, cap);
  // w_i approximates sigma^-1(x_i); each pass fixes the lowest wrong degree.
  std::vector<Series> w;
  for (int i = 0; i < n; ++i) w.push_back(lin.image(i).without_constant());
  for (int pass = 0; pass <= cap; ++pass) {
    bool done = true;
    for (int i = 0; i < n; ++i) {
      Series err = Series::generator(n, cap, i) - sigma.apply(w[i]);
      if (err.is_zero()) continue;
      done = false;
      w[i] += lin.apply(err);
    }
    if (done) break;
  }
  std::vector<Series> imgs;
  for (int i = 0; i < n; ++i) imgs.push_back(Series::one(n, cap) + w[i]);
  return ExpansionAuto(std::move(imgs));
}

// theta_* of the endomorphism gamma_i -> words[i].
inline ExpansionAuto auto_from_group_images(const std::vector<GroupWord>& words, const MagnusExpansion& theta) {
  if (static_cast<int>(words.size()) != theta.rank())
    throw PreconditionViolated("need one image word per generator");
  std::vector<Series> u;
  for (const auto& w : words) u.push_back(theta.expand(w));
  ExpansionAuto U(std::move(u));
  if (theta.is_standard()) return U;
  std::vector<Series> e;
  for (int i = 1; i <= theta.rank(); ++i) e.push_back(theta.image(i));
  return auto_compose(U, auto_invert(ExpansionAuto(std::move(e))));
}

// Largest d with image_i - (1 + x_i) of lowest degree >= d + 1 for all i;
// nullopt when sigma is the identity up to the cap.
inline std::optional<int> ia_degree(const ExpansionAuto& sigma) {
  int low = -1;
  for (int i = 0; i < sigma.rank(); ++i) {
    Series diff = sigma.image(i) - Series::one(sigma.rank(), sigma.cap()) -
                  Series::generator(sigma.rank(), sigma.cap(), i);
    int l = diff.lowest_degree();
    if (l >= 0 && (low < 0 || l < low)) low = l;
  }
  if (low < 0) return std::nullopt;
  return low - 1;
}

// Value of a degree-d derivation on each generator: homogeneous of degree d+1.
struct HomDerivation {
  int degree = 0;
  std::vector<Series> values;

  bool operator==(const HomDerivation& o) const { return degree == o.degree && values == o.values; }
  friend HomDerivation operator+(HomDerivation a, const HomDerivation& b) {
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values.at(i);
    return a;
  }
  friend HomDerivation operator*(const Rational& q, HomDerivation a) {
    for (auto& v : a.values) v = q * v;
    return a;
  }
};

inline HomDerivation tau(const ExpansionAuto& sigma, int d) {
  if (d < 1) throw PreconditionViolated("tau degree must be >= 1");
  if (d + 1 > sigma.cap()) throw PreconditionViolated("tau_d needs cap >= d + 1");
  auto ia = ia_degree(sigma);
  if (ia && *ia < d)
    throw FiltrationTooShallow("automorphism has filtration degree " + std::to_string(*ia) + " < " + std::to_string(d));
  HomDerivation f{d, {}};
  for (int i = 0; i < sigma.rank(); ++i) f.values.push_back(sigma.image(i).degree_part(d + 1));
  return f;
}

inline Series left_bracketing(const std::vector<int>& letters, int rank, int cap) {
  Series b = Series::generator(rank, cap, letters.at(0));
  for (std::size_t t = 1; t < letters.size(); ++t) {
    Series x = Series::generator(rank, cap, letters[t]);
    b = b * x - x * b;
  }
  return b;
}

inline bool dynkin_is_lie(const Series& w) {
  int n = w.lowest_degree();
  if (n < 0) return true;
  if (!w.is_homogeneous_of(n)) throw NotHomogeneous("Dynkin test needs a homogeneous series");
  if (n == 0) return false;
  Series img(w.rank(), w.cap());
  for (const auto& t : w.stratum(n)) img += t.coeff * left_bracketing(unpack_mono(t.key, n), w.rank(), w.cap());
  return img == Rational(n) * w;
}

// Intersection pairing on H = Q^{2g}: gamma_i . gamma_{i+g} = +1.
class SymplecticForm {
 public:
  explicit SymplecticForm(int genus) : g_(genus) {}
  int genus() const { return g_; }
  int rank() const { return 2 * g_; }

  // 0-based basis vectors
  int pairing(int i, int j) const {
    if (i < g_ && j == i + g_) return 1;
    if (i >= g_ && j == i - g_) return -1;
    return 0;
  }

  std::vector<Rational> sharp(int i) const {
    std::vector<Rational> v(rank(), 0);
    if (i < g_)
      v[i + g_] = -1;
    else
      v[i - g_] = 1;
    return v;
  }

  Rational dot(const std::vector<Rational>& v, int basis) const {
    Rational s = 0;
    for (int k = 0; k < rank(); ++k)
      if (v[k] != 0) s += v[k] * pairing(k, basis);
    return s;
  }

 private:
  int g_;
};

inline CyclicSeries es_trace(const HomDerivation& f) {
  if (f.degree < 1) throw PreconditionViolated("es_trace needs degree >= 1");
  if (f.values.empty()) throw PreconditionViolated("es_trace of an empty derivation");
  const int rank = f.values[0].rank();
  if (rank % 2 != 0) throw PreconditionViolated("es_trace needs even rank");
  SymplecticForm form(rank / 2);
  const int d = f.degree;
  CyclicSeries out(rank, f.values[0].cap());
  for (int i = 0; i < rank; ++i) {
    const Series& w = f.values.at(i);
    if (w.cap() < d + 1) continue;
    std::vector<Rational> s = form.sharp(i);
    for (const auto& t : w.stratum(d + 1)) {
      std::vector<int> letters = unpack_mono(t.key, d + 1);
      Rational pair = form.dot(s, letters[0]);
      if (pair == 0) continue;
      out.add(std::vector<int>(letters.begin() + 1, letters.end()), pair * t.coeff);
    }
  }
  return out;
}

inline std::vector<Rational> contract_C1(const HomDerivation& f) {
  if (f.degree != 1) throw PreconditionViolated("contract_C1 needs a degree-1 derivation");
  CyclicSeries c = es_trace(f);
  std::vector<Rational> h(c.rank(), 0);
  for (const auto& [k, q] : c.stratum(1)) h[static_cast<int>(k)] = q;
  return h;
}

// log(sigma) as a derivation, evaluated on the generators.
inline std::vector<Series> log_derivation(const ExpansionAuto& sigma) {
  std::vector<Series> out;
  for (int i = 0; i < sigma.rank(); ++i) {
    Series x = Series::generator(sigma.rank(), sigma.cap(), i);
    Series acc(sigma.rank(), sigma.cap());
    Series power = x;
    for (int k = 1; k <= sigma.cap(); ++k) {
      power = sigma.apply(power) - power;
      if (power.is_zero()) break;
      acc += Rational(k % 2 == 1 ? 1 : -1, k) * power;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

inline CyclicSeries act_auto(const ExpansionAuto& sigma, const CyclicSeries& c) {
  if (sigma.cap() < c.cap()) throw TruncationMismatch("automorphism cap below cyclic cap");
  if (sigma.rank() != c.rank()) throw RankMismatch("automorphism rank differs");
  const ExpansionAuto s = sigma.cap() == c.cap() ? sigma : sigma.truncated(c.cap());
  return project_cyclic(s.apply(lift_cyclic(c)));
}

}  // namespace hcyl
