#pragma once

// Cyclic words: prod_k H^{(x)k} / Z_k with necklace normal forms, the
// reversal involution rho and its eigenprojections.
//
// The (+1)-eigenspace of rho stands in for the 1-loop diagram space; the class
// O(x_1,...,x_d) is identified with (w + rho w)/2 for w = x_1...x_d.

#include <map>
#include <numeric>
#include <vector>

#include "hcyl/errors.hpp"
#include "hcyl/rational.hpp"
#include "hcyl/tensor_series.hpp"

namespace hcyl {

// Lexicographically least rotation.
inline std::vector<int> canonical_rotation(const std::vector<int>& letters) {
  const std::size_t n = letters.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      int a = letters[(r + i) % n], b = letters[(best + i) % n];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = letters[(best + i) % n];
  return out;
}

inline MonoKey canonical_key(MonoKey key, int degree) {
  return pack_mono(canonical_rotation(unpack_mono(key, degree)));
}

class CyclicSeries {
 public:
  using Stratum = std::map<MonoKey, Rational>;

  CyclicSeries() = default;
  CyclicSeries(int rank, int cap) : rank_(rank), cap_(cap), strata_(cap + 1) {}

  int rank() const { return rank_; }
  int cap() const { return cap_; }
  const Stratum& stratum(int degree) const { return strata_.at(degree); }

  // letters 0-based, any rotation
  void add(const std::vector<int>& letters, const Rational& c) {
    int d = static_cast<int>(letters.size());
    if (d == 0) throw NonzeroConstantTerm("cyclic words have degree >= 1");
    for (int a : letters)
      if (a < 0 || a >= rank_) throw PreconditionViolated("cyclic letter outside rank");
    if (d > cap_) return;
    add_canonical(d, pack_mono(canonical_rotation(letters)), c);
  }

  void add_canonical(int degree, MonoKey key, const Rational& c) {
    if (c == 0 || degree > cap_) return;
    auto& st = strata_[degree];
    auto [it, fresh] = st.try_emplace(key, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) st.erase(it);
    }
  }

  Rational coeff(const std::vector<int>& letters) const {
    int d = static_cast<int>(letters.size());
    if (d == 0 || d > cap_) return 0;
    auto it = strata_[d].find(pack_mono(canonical_rotation(letters)));
    return it == strata_[d].end() ? Rational(0) : it->second;
  }

  bool is_zero() const {
    for (const auto& s : strata_)
      if (!s.empty()) return false;
    return true;
  }

  int lowest_degree() const {
    for (int d = 1; d <= cap_; ++d)
      if (!strata_[d].empty()) return d;
    return -1;
  }

  std::size_t num_terms() const {
    std::size_t n = 0;
    for (const auto& s : strata_) n += s.size();
    return n;
  }

  CyclicSeries degree_part(int degree) const {
    CyclicSeries out(rank_, cap_);
    if (degree >= 1 && degree <= cap_) out.strata_[degree] = strata_[degree];
    return out;
  }

  CyclicSeries truncated(int new_cap) const {
    if (new_cap > cap_) throw TruncationMismatch("cannot raise cyclic cap");
    CyclicSeries out(rank_, new_cap);
    for (int d = 1; d <= new_cap; ++d) out.strata_[d] = strata_[d];
    return out;
  }

  template <class F>
  void for_each_term(F&& f) const {
    for (int d = 1; d <= cap_; ++d)
      for (const auto& [k, c] : strata_[d]) f(d, k, c);
  }

  CyclicSeries& operator+=(const CyclicSeries& o) {
    check_compatible(o);
    for (int d = 1; d <= cap_; ++d)
      for (const auto& [k, c] : o.strata_[d]) add_canonical(d, k, c);
    return *this;
  }
  CyclicSeries& operator-=(const CyclicSeries& o) {
    check_compatible(o);
    for (int d = 1; d <= cap_; ++d)
      for (const auto& [k, c] : o.strata_[d]) add_canonical(d, k, -c);
    return *this;
  }
  friend CyclicSeries operator+(CyclicSeries a, const CyclicSeries& b) { return a += b; }
  friend CyclicSeries operator-(CyclicSeries a, const CyclicSeries& b) { return a -= b; }
  friend CyclicSeries operator-(const CyclicSeries& a) { return CyclicSeries(a.rank_, a.cap_) - a; }
  friend CyclicSeries operator*(const Rational& q, CyclicSeries a) {
    if (q == 0) return CyclicSeries(a.rank_, a.cap_);
    for (auto& st : a.strata_)
      for (auto& [k, c] : st) c *= q;
    return a;
  }
  bool operator==(const CyclicSeries& o) const {
    return rank_ == o.rank_ && cap_ == o.cap_ && strata_ == o.strata_;
  }
  bool operator!=(const CyclicSeries& o) const { return !(*this == o); }

  void check_compatible(const CyclicSeries& o) const {
    if (cap_ != o.cap_) throw TruncationMismatch("cyclic caps " + std::to_string(cap_) + " and " + std::to_string(o.cap_));
    if (rank_ != o.rank_) throw RankMismatch("cyclic ranks differ");
  }

 private:
  int rank_ = 0;
  int cap_ = 0;
  std::vector<Stratum> strata_;
};

// A degree-d element fixed by rho.
struct LoopDiagramElement {
  int degree = 0;
  CyclicSeries value;
};

inline CyclicSeries project_cyclic(const Series& s) {
  if (s.constant_term() != 0) throw NonzeroConstantTerm("project_cyclic needs zero constant term");
  CyclicSeries out(s.rank(), s.cap());
  for (int d = 1; d <= s.cap(); ++d)
    for (const auto& t : s.stratum(d)) out.add_canonical(d, canonical_key(t.key, d), t.coeff);
  return out;
}

// Tensor representatives of each cyclic class (the canonical rotation).
inline Series lift_cyclic(const CyclicSeries& c) {
  Series s(c.rank(), c.cap());
  c.for_each_term([&](int d, MonoKey k, const Rational& q) { s.add_term(d, k, q); });
  return s;
}

inline CyclicSeries rho(const CyclicSeries& c) {
  CyclicSeries out(c.rank(), c.cap());
  c.for_each_term([&](int d, MonoKey k, const Rational& q) {
    std::vector<int> w = unpack_mono(k, d);
    std::reverse(w.begin(), w.end());
    out.add(w, d % 2 == 0 ? q : Rational(-q));
  });
  return out;
}

inline CyclicSeries p_minus(const CyclicSeries& c) { return Rational(1, 2) * (c - rho(c)); }
inline CyclicSeries p_plus(const CyclicSeries& c) { return Rational(1, 2) * (c + rho(c)); }

inline LoopDiagramElement p_plus(const CyclicSeries& c, int degree) {
  return LoopDiagramElement{degree, p_plus(c.degree_part(degree))};
}

// Number of necklaces of length d over an alphabet of size n.
inline Integer necklace_count(int alphabet, int d) {
  auto phi = [](int m) {
    int r = m;
    for (int p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        while (m % p == 0) m /= p;
        r -= r / p;
      }
    if (m > 1) r -= r / m;
    return r;
  };
  Integer total = 0;
  for (int e = 1; e <= d; ++e) {
    if (d % e != 0) continue;
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(alphabet), static_cast<unsigned long>(d / e));
    total += phi(e) * p;
  }
  return total / d;
}

}  // namespace hcyl
