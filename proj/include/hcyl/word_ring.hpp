#pragma once

// Free-group words, the rational group ring, the bar involution and Fox calculus.
// Letters are signed 1-based generator indices: +i is gamma_i, -i its inverse.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hcyl/errors.hpp"
#include "hcyl/rational.hpp"

namespace hcyl {

class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(const std::vector<int>& letters) {
    letters_.reserve(letters.size());
    for (int a : letters) push(a);
  }
  static GroupWord generator(int index) { return GroupWord(std::vector<int>{index}); }

  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  int max_index() const {
    int m = 0;
    for (int a : letters_) m = std::max(m, std::abs(a));
    return m;
  }

  GroupWord inverse() const {
    GroupWord out;
    out.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.letters_.push_back(-*it);
    return out;
  }

  GroupWord operator*(const GroupWord& rhs) const {
    GroupWord out = *this;
    for (int a : rhs.letters_) out.push(a);
    return out;
  }

  // Exponent sum of generator `index`.
  int exponent_sum(int index) const {
    int s = 0;
    for (int a : letters_) {
      if (a == index) ++s;
      if (a == -index) --s;
    }
    return s;
  }

  auto operator<=>(const GroupWord&) const = default;
  bool operator==(const GroupWord&) const = default;

 private:
  void push(int a) {
    if (a == 0) throw PreconditionViolated("generator index 0 in word");
    if (!letters_.empty() && letters_.back() == -a)
      letters_.pop_back();
    else
      letters_.push_back(a);
  }
  std::vector<int> letters_;
};

inline GroupWord commutator(const GroupWord& a, const GroupWord& b) {
  return a * b * a.inverse() * b.inverse();
}

inline GroupWord power(const GroupWord& w, int n) {
  GroupWord base = n < 0 ? w.inverse() : w;
  GroupWord out;
  for (int k = 0; k < std::abs(n); ++k) out = out * base;
  return out;
}

// Finite formal sum of words with nonzero rational coefficients.
class RingElement {
 public:
  using Terms = std::map<GroupWord, Rational>;

  RingElement() = default;
  explicit RingElement(const GroupWord& w, const Rational& c = 1) { add(w, c); }
  static RingElement scalar(const Rational& c) { return RingElement(GroupWord(), c); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(const GroupWord& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const GroupWord& w, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational augmentation() const {
    Rational s = 0;
    for (const auto& [w, c] : terms_) s += c;
    return s;
  }

  RingElement& operator+=(const RingElement& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }
  RingElement& operator-=(const RingElement& o) {
    for (const auto& [w, c] : o.terms_) add(w, -c);
    return *this;
  }
  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
  friend RingElement operator-(const RingElement& a) { return RingElement() - a; }
  friend RingElement operator*(const Rational& q, const RingElement& a) {
    RingElement out;
    if (q == 0) return out;
    for (const auto& [w, c] : a.terms_) out.terms_.emplace(w, q * c);
    return out;
  }
  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    RingElement out;
    for (const auto& [u, cu] : a.terms_)
      for (const auto& [v, cv] : b.terms_) out.add(u * v, cu * cv);
    return out;
  }
  bool operator==(const RingElement&) const = default;

 private:
  Terms terms_;
};

inline RingElement bar(const RingElement& v) {
  RingElement out;
  for (const auto& [w, c] : v.terms()) out.add(w.inverse(), c);
  return out;
}

// Left Fox derivative d w / d gamma_index.
inline RingElement fox_derivative(const GroupWord& w, int index) {
  RingElement out;
  GroupWord prefix;
  for (int a : w.letters()) {
    if (a == index) out.add(prefix, 1);
    GroupWord next = prefix * GroupWord::generator(a);
    if (a == -index) out.add(next, -1);
    prefix = std::move(next);
  }
  return out;
}

inline RingElement fox_derivative(const RingElement& v, int index) {
  RingElement out;
  for (const auto& [w, c] : v.terms()) out += c * fox_derivative(w, index);
  return out;
}

// entry [i][j] = bar(d relators[j] / d gens[i])
inline std::vector<std::vector<RingElement>> fox_matrix(const std::vector<GroupWord>& relators,
                                                        const std::vector<int>& gens) {
  std::vector<std::vector<RingElement>> m(gens.size(), std::vector<RingElement>(relators.size()));
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < relators.size(); ++j)
      m[i][j] = bar(fox_derivative(relators[j], gens[i]));
  return m;
}

// ---------------------------------------------------------------------------
// Text syntax. A token names a generator; a token starting with an uppercase
// letter denotes the inverse of the generator named by its lowercase form.

using NameResolver = std::function<int(const std::string&)>;  // lowercase name -> index, 0 if unknown

inline NameResolver surface_names() {
  return [](const std::string& name) -> int {
    if (name.size() < 2 || name[0] != 'g') return 0;
    for (std::size_t i = 1; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return 0;
    if (name[1] == '0') return 0;
    return std::stoi(name.substr(1));
  };
}

inline NameResolver table_names(const std::vector<std::string>& names) {
  std::map<std::string, int> table;
  for (std::size_t i = 0; i < names.size(); ++i) table[names[i]] = static_cast<int>(i) + 1;
  return [table](const std::string& name) -> int {
    auto it = table.find(name);
    return it == table.end() ? 0 : it->second;
  };
}

inline std::string lowercase(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

inline std::string uppercase(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

inline GroupWord parse_word(std::string_view text, const NameResolver& resolve = surface_names()) {
  std::istringstream in{std::string(text)};
  std::vector<int> letters;
  std::string tok;
  while (in >> tok) {
    if (tok == "1" || tok == "e") continue;
    bool inverse = std::isupper(static_cast<unsigned char>(tok[0])) != 0;
    std::string name = lowercase(tok);
    if (!inverse && tok != name) throw ParseError("mixed-case generator token '" + tok + "'");
    if (inverse && tok != uppercase(name)) throw ParseError("mixed-case generator token '" + tok + "'");
    int idx = resolve(name);
    if (idx <= 0) throw ParseError("unknown generator '" + tok + "'");
    letters.push_back(inverse ? -idx : idx);
  }
  return GroupWord(letters);
}

inline std::string format_word(const GroupWord& w,
                               const std::vector<std::string>& names = {}) {
  if (w.is_identity()) return "1";
  std::string out;
  for (int a : w.letters()) {
    if (!out.empty()) out += ' ';
    int idx = std::abs(a);
    std::string name = names.empty() ? "g" + std::to_string(idx) : names.at(idx - 1);
    out += a > 0 ? name : uppercase(name);
  }
  return out;
}

inline std::string format_ring_element(const RingElement& v,
                                       const std::vector<std::string>& names = {}) {
  if (v.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : v.terms()) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (w.is_identity()) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + "*";
      out += format_word(w, names);
    }
  }
  return out;
}

// Terms "coeff*word", "word", or "coeff" joined by + and -.
inline RingElement parse_ring_element(std::string_view text,
                                      const NameResolver& resolve = surface_names()) {
  RingElement out;
  std::string s(text);
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  skip_ws();
  if (s.substr(pos) == "0") return out;
  bool any = false;
  while (true) {
    skip_ws();
    if (pos >= s.size()) break;
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (any) {
      throw ParseError("expected + or - in ring element '" + s + "'");
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;
    while (!term.empty() && std::isspace(static_cast<unsigned char>(term.back()))) term.pop_back();
    if (term.empty()) throw ParseError("empty term in ring element '" + s + "'");
    Rational coeff = 1;
    std::string word_text;
    std::size_t star = term.find('*');
    if (star != std::string::npos) {
      coeff = parse_rational(term.substr(0, star));
      word_text = term.substr(star + 1);
    } else if (std::isdigit(static_cast<unsigned char>(term[0]))) {
      coeff = parse_rational(term);
    } else {
      word_text = term;
    }
    out.add(parse_word(word_text, resolve), sign * coeff);
    any = true;
  }
  if (!any) throw ParseError("empty ring element");
  return out;
}

}  // namespace hcyl
