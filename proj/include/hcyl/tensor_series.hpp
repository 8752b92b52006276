#pragma once

// Truncated completed tensor algebra over H = Q^rank with generators x_1..x_rank.
// Monomials are packed four bits per letter, first letter most significant, so
// numeric order inside a degree stratum is lexicographic order of the letters.
// Letters are 0-based internally; the JSON layer shifts them to 1-based.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hcyl/errors.hpp"
#include "hcyl/rational.hpp"
#include "hcyl/word_ring.hpp"

namespace hcyl {

using MonoKey = std::uint64_t;
inline constexpr int kLetterBits = 4;
inline constexpr int kMaxRank = 16;
inline constexpr int kMaxCap = 16;

inline MonoKey pack_mono(const std::vector<int>& letters) {
  MonoKey k = 0;
  for (int a : letters) k = (k << kLetterBits) | static_cast<MonoKey>(a);
  return k;
}

inline std::vector<int> unpack_mono(MonoKey key, int degree) {
  std::vector<int> out(degree);
  for (int p = degree - 1; p >= 0; --p) {
    out[p] = static_cast<int>(key & 0xF);
    key >>= kLetterBits;
  }
  return out;
}

inline int mono_letter(MonoKey key, int degree, int pos) {
  return static_cast<int>((key >> (kLetterBits * (degree - 1 - pos))) & 0xF);
}

inline MonoKey concat_mono(MonoKey a, MonoKey b, int degree_b) {
  return degree_b == 0 ? a : (a << (kLetterBits * degree_b)) | b;
}

struct Term {
  MonoKey key;
  Rational coeff;
};

class Series;

// Scratch accumulator used by products and builders.
class SeriesAccumulator {
 public:
  SeriesAccumulator(int rank, int cap) : rank_(rank), cap_(cap), strata_(cap + 1) {}
  void add(int degree, MonoKey key, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = strata_[degree].try_emplace(key, c);
    if (!fresh) it->second += c;
  }
  void add_product(int degree, MonoKey key, const Rational& a, const Rational& b) {
    auto [it, fresh] = strata_[degree].try_emplace(key);
    if (fresh) {
      mpq_mul(it->second.get_mpq_t(), a.get_mpq_t(), b.get_mpq_t());
    } else {
      mpq_mul(tmp_.get_mpq_t(), a.get_mpq_t(), b.get_mpq_t());
      it->second += tmp_;
    }
  }
  Series finish();

 private:
  int rank_, cap_;
  std::vector<std::unordered_map<MonoKey, Rational>> strata_;
  Rational tmp_;
};

class Series {
 public:
  Series() = default;
  Series(int rank, int cap) : rank_(rank), cap_(cap), strata_(cap + 1) {
    if (rank < 1 || rank > kMaxRank) throw PreconditionViolated("series rank out of range");
    if (cap < 0 || cap > kMaxCap) throw PreconditionViolated("series cap out of range");
  }

  static Series constant(int rank, int cap, const Rational& c) {
    Series s(rank, cap);
    if (c != 0) s.strata_[0].push_back({0, c});
    return s;
  }
  static Series one(int rank, int cap) { return constant(rank, cap, 1); }
  // 0-based generator index
  static Series generator(int rank, int cap, int index, const Rational& c = 1) {
    return monomial(rank, cap, {index}, c);
  }
  static Series monomial(int rank, int cap, const std::vector<int>& letters, const Rational& c = 1) {
    Series s(rank, cap);
    for (int a : letters)
      if (a < 0 || a >= rank) throw PreconditionViolated("monomial letter outside rank");
    if (c != 0 && static_cast<int>(letters.size()) <= cap)
      s.strata_[letters.size()].push_back({pack_mono(letters), c});
    return s;
  }

  int rank() const { return rank_; }
  int cap() const { return cap_; }
  const std::vector<Term>& stratum(int degree) const { return strata_.at(degree); }
  std::size_t num_terms() const {
    std::size_t n = 0;
    for (const auto& s : strata_) n += s.size();
    return n;
  }

  Rational constant_term() const { return strata_.empty() || strata_[0].empty() ? Rational(0) : strata_[0][0].coeff; }

  Rational coeff(const std::vector<int>& letters) const {
    int d = static_cast<int>(letters.size());
    if (d > cap_) return 0;
    MonoKey k = pack_mono(letters);
    const auto& st = strata_[d];
    auto it = std::lower_bound(st.begin(), st.end(), k, [](const Term& t, MonoKey key) { return t.key < key; });
    return (it != st.end() && it->key == k) ? it->coeff : Rational(0);
  }

  bool is_zero() const {
    for (const auto& s : strata_)
      if (!s.empty()) return false;
    return true;
  }

  // -1 for the zero series
  int lowest_degree() const {
    for (int d = 0; d <= cap_; ++d)
      if (!strata_[d].empty()) return d;
    return -1;
  }

  bool is_homogeneous_of(int degree) const {
    for (int d = 0; d <= cap_; ++d)
      if (d != degree && !strata_[d].empty()) return false;
    return true;
  }

  Series degree_part(int degree) const {
    Series s(rank_, cap_);
    if (degree >= 0 && degree <= cap_) s.strata_[degree] = strata_[degree];
    return s;
  }

  Series without_constant() const {
    Series s = *this;
    s.strata_[0].clear();
    return s;
  }

  Series truncated(int new_cap) const {
    if (new_cap > cap_) throw TruncationMismatch("cannot raise cap from " + std::to_string(cap_));
    Series s(rank_, new_cap);
    for (int d = 0; d <= new_cap; ++d) s.strata_[d] = strata_[d];
    return s;
  }

  // Drop terms of degree > max_degree, keeping the cap label.
  Series truncated_above(int max_degree) const {
    Series s = *this;
    for (int d = std::max(0, max_degree + 1); d <= cap_; ++d) s.strata_[d].clear();
    return s;
  }

  void add_term(int degree, MonoKey key, const Rational& c) {
    if (c == 0 || degree > cap_) return;
    auto& st = strata_[degree];
    auto it = std::lower_bound(st.begin(), st.end(), key, [](const Term& t, MonoKey k) { return t.key < k; });
    if (it != st.end() && it->key == key) {
      it->coeff += c;
      if (it->coeff == 0) st.erase(it);
    } else {
      st.insert(it, Term{key, c});
    }
  }

  void add_term(const std::vector<int>& letters, const Rational& c) {
    for (int a : letters)
      if (a < 0 || a >= rank_) throw PreconditionViolated("monomial letter outside rank");
    add_term(static_cast<int>(letters.size()), pack_mono(letters), c);
  }

  template <class F>
  void for_each_term(F&& f) const {
    for (int d = 0; d <= cap_; ++d)
      for (const auto& t : strata_[d]) f(d, t.key, t.coeff);
  }

  Series& operator+=(const Series& o) { return merge(o, 1); }
  Series& operator-=(const Series& o) { return merge(o, -1); }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(Series a) {
    for (auto& st : a.strata_)
      for (auto& t : st) t.coeff = -t.coeff;
    return a;
  }
  friend Series operator*(const Rational& q, Series a) {
    if (q == 0) return Series(a.rank_, a.cap_);
    for (auto& st : a.strata_)
      for (auto& t : st) t.coeff *= q;
    return a;
  }
  friend Series operator*(const Series& a, const Series& b) { return multiply(a, b, a.cap_); }

  // Product keeping only degrees <= max_degree.
  static Series multiply(const Series& a, const Series& b, int max_degree) {
    a.check_compatible(b);
    max_degree = std::min(max_degree, a.cap_);
    if (a.is_scalar()) return (a.constant_term() * b).truncated_above(max_degree);
    if (b.is_scalar()) return (b.constant_term() * a).truncated_above(max_degree);
    SeriesAccumulator acc(a.rank_, a.cap_);
    for (int da = 0; da <= max_degree; ++da) {
      if (a.strata_[da].empty()) continue;
      for (int db = 0; da + db <= max_degree; ++db) {
        const auto& sb = b.strata_[db];
        if (sb.empty()) continue;
        for (const auto& ta : a.strata_[da])
          for (const auto& tb : sb) acc.add_product(da + db, concat_mono(ta.key, tb.key, db), ta.coeff, tb.coeff);
      }
    }
    return acc.finish();
  }

  // Right multiplication by x_index (0-based); cheap shift of keys.
  Series times_generator(int index) const {
    Series s(rank_, cap_);
    for (int d = 0; d < cap_; ++d)
      for (const auto& t : strata_[d]) s.strata_[d + 1].push_back({(t.key << kLetterBits) | static_cast<MonoKey>(index), t.coeff});
    return s;
  }

  bool operator==(const Series& o) const {
    if (rank_ != o.rank_ || cap_ != o.cap_) return false;
    for (int d = 0; d <= cap_; ++d) {
      const auto& x = strata_[d];
      const auto& y = o.strata_[d];
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].key != y[i].key || x[i].coeff != y[i].coeff) return false;
    }
    return true;
  }
  bool operator!=(const Series& o) const { return !(*this == o); }

  bool is_scalar() const {
    for (int d = 1; d <= cap_; ++d)
      if (!strata_[d].empty()) return false;
    return true;
  }

  void check_compatible(const Series& o) const {
    if (cap_ != o.cap_)
      throw TruncationMismatch("caps " + std::to_string(cap_) + " and " + std::to_string(o.cap_));
    if (rank_ != o.rank_)
      throw RankMismatch("ranks " + std::to_string(rank_) + " and " + std::to_string(o.rank_));
  }

 private:
  friend class SeriesAccumulator;

  Series& merge(const Series& o, int sign) {
    check_compatible(o);
    for (int d = 0; d <= cap_; ++d) {
      const auto& y = o.strata_[d];
      if (y.empty()) continue;
      auto& x = strata_[d];
      std::vector<Term> out;
      out.reserve(x.size() + y.size());
      std::size_t i = 0, j = 0;
      while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].key < y[j].key)) {
          out.push_back(std::move(x[i++]));
        } else if (i == x.size() || y[j].key < x[i].key) {
          out.push_back({y[j].key, sign > 0 ? y[j].coeff : Rational(-y[j].coeff)});
          ++j;
        } else {
          Rational c = sign > 0 ? Rational(x[i].coeff + y[j].coeff) : Rational(x[i].coeff - y[j].coeff);
          if (c != 0) out.push_back({x[i].key, std::move(c)});
          ++i;
          ++j;
        }
      }
      x = std::move(out);
    }
    return *this;
  }

  int rank_ = 0;
  int cap_ = 0;
  std::vector<std::vector<Term>> strata_;
};

inline Series SeriesAccumulator::finish() {
  Series s(rank_, cap_);
  for (int d = 0; d <= cap_; ++d) {
    auto& out = s.strata_[d];
    out.reserve(strata_[d].size());
    for (auto& [k, c] : strata_[d])
      if (c != 0) out.push_back({k, std::move(c)});
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
    strata_[d].clear();
  }
  return s;
}

// ---------------------------------------------------------------------------

inline Series series_invert(const Series& u) {
  Rational c = u.constant_term();
  if (c == 0) throw NotAUnit("series with zero constant term");
  Rational ci = 1 / c;
  Series y = ci * u.without_constant();  // u = c(1 + y)
  Series result = Series::one(u.rank(), u.cap());
  Series power = result;
  for (int k = 1; k <= u.cap(); ++k) {
    power = -(power * y);
    if (power.is_zero()) break;
    result += power;
  }
  return ci * result;
}

inline Series series_log(const Series& u) {
  if (u.constant_term() != 1) throw BadAugmentation("log needs constant term 1");
  Series x = u.without_constant();
  Series result(u.rank(), u.cap());
  Series power = x;
  for (int k = 1; k <= u.cap(); ++k) {
    if (power.is_zero()) break;
    result += Rational(k % 2 == 1 ? 1 : -1, k) * power;
    power = Series::multiply(power, x, u.cap());
  }
  return result;
}

inline Series series_exp(const Series& v) {
  if (v.constant_term() != 0) throw BadAugmentation("exp needs constant term 0");
  Series result = Series::one(v.rank(), v.cap());
  Series power = result;
  for (int k = 1; k <= v.cap(); ++k) {
    power = Rational(1, k) * (power * v);
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Magnus expansions: multiplicative maps gamma_i -> 1 + x_i + (higher).

class MagnusExpansion {
 public:
  static MagnusExpansion standard(int rank, int cap) {
    std::vector<Series> images;
    for (int i = 0; i < rank; ++i) images.push_back(Series::one(rank, cap) + Series::generator(rank, cap, i));
    MagnusExpansion m(std::move(images));
    m.standard_ = true;
    return m;
  }

  // images[i] must be 1 + x_i + (terms of degree >= 2)
  static MagnusExpansion from_images(std::vector<Series> images) {
    if (images.empty()) throw PreconditionViolated("expansion needs at least one generator");
    int rank = images[0].rank();
    int cap = images[0].cap();
    if (static_cast<int>(images.size()) != rank) throw PreconditionViolated("expansion needs one image per generator");
    for (int i = 0; i < rank; ++i) {
      const Series& s = images[i];
      if (s.rank() != rank || s.cap() != cap) throw TruncationMismatch("expansion images disagree on rank/cap");
      Series low = s.truncated_above(1);
      if (low != Series::one(rank, cap) + Series::generator(rank, cap, i))
        throw PreconditionViolated("expansion image " + std::to_string(i + 1) + " is not 1 + x_i + higher");
    }
    MagnusExpansion m(std::move(images));
    m.standard_ = true;
    for (int i = 0; i < m.rank() && m.standard_; ++i)
      if (m.images_[i].num_terms() != 2) m.standard_ = false;
    return m;
  }

  int rank() const { return static_cast<int>(images_.size()); }
  int cap() const { return images_.front().cap(); }
  bool is_standard() const { return standard_; }

  // 1-based generator
  const Series& image(int generator) const { return images_.at(generator - 1); }
  const Series& inverse_image(int generator) const { return inverses_.at(generator - 1); }

  Series expand(const GroupWord& w) const {
    Series out = Series::one(rank(), cap());
    for (int a : w.letters()) {
      int g = a > 0 ? a : -a;
      if (g > rank()) throw RankMismatch("word letter beyond expansion rank");
      if (a > 0 && standard_)
        out += out.times_generator(g - 1);
      else
        out = out * (a > 0 ? images_[g - 1] : inverses_[g - 1]);
    }
    return out;
  }

  Series expand(const RingElement& v) const {
    Series out(rank(), cap());
    for (const auto& [w, c] : v.terms()) out += c * expand(w);
    return out;
  }

  MagnusExpansion truncated(int new_cap) const {
    std::vector<Series> imgs;
    for (const auto& s : images_) imgs.push_back(s.truncated(new_cap));
    MagnusExpansion m(std::move(imgs));
    m.standard_ = standard_;
    return m;
  }

 private:
  explicit MagnusExpansion(std::vector<Series> images) : images_(std::move(images)) {
    for (const auto& s : images_) inverses_.push_back(series_invert(s));
  }
  std::vector<Series> images_;
  std::vector<Series> inverses_;
  bool standard_ = false;
};

inline Series magnus_expand(const GroupWord& w, int rank, int cap) {
  return MagnusExpansion::standard(rank, cap).expand(w);
}

inline Series magnus_expand(const RingElement& v, int rank, int cap) {
  return MagnusExpansion::standard(rank, cap).expand(v);
}

// Lowest degree of theta(w) - 1; nullopt means "exceeds the cap".
inline std::optional<int> word_degree_bound(const GroupWord& w, const MagnusExpansion& theta) {
  Series s = theta.expand(w).without_constant();
  int d = s.lowest_degree();
  if (d < 0) return std::nullopt;
  return d;
}

}  // namespace hcyl
