#pragma once

// JSON forms of series, cyclic series, K1 values, automorphisms, presentations,
// clasper data and cylinder invariants. Rationals travel as "p/q" strings and
// letters as 1-based indices.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcyl/clasper.hpp"
#include "hcyl/cyclic_words.hpp"
#include "hcyl/cylinder.hpp"
#include "hcyl/errors.hpp"
#include "hcyl/johnson_es.hpp"
#include "hcyl/k1_ldet.hpp"
#include "hcyl/rational.hpp"
#include "hcyl/tensor_series.hpp"

namespace hcyl {

using Json = nlohmann::ordered_json;

namespace detail {

inline Rational json_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string or integer, got " + j.dump());
}

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline int json_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

inline std::vector<int> json_letters(const Json& j, int rank) {
  if (!j.is_array()) throw ParseError("monomial must be an array of letter indices");
  std::vector<int> out;
  for (const auto& a : j) {
    int v = json_int(a, "letter");
    if (v < 1 || v > rank) throw ParseError("letter " + std::to_string(v) + " outside 1.." + std::to_string(rank));
    out.push_back(v - 1);
  }
  return out;
}

inline std::string json_string(const Json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline std::vector<std::string> json_names(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& n : j) out.push_back(lowercase(json_string(n, what)));
  return out;
}

}  // namespace detail

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

inline Json to_json(const Series& s) {
  Json terms = Json::array();
  s.for_each_term([&](int d, MonoKey key, const Rational& c) {
    Json mono = Json::array();
    for (int a : unpack_mono(key, d)) mono.push_back(a + 1);
    terms.push_back({{"mono", mono}, {"coeff", to_string(c)}});
  });
  return {{"cap", s.cap()}, {"terms", terms}};
}

inline Series series_from_json(const Json& j, int rank) {
  int cap = detail::json_int(detail::require(j, "cap"), "cap");
  if (cap < 0) throw ParseError("cap must be >= 0");
  Series s(rank, cap);
  for (const auto& t : detail::require(j, "terms")) {
    std::vector<int> m = detail::json_letters(detail::require(t, "mono"), rank);
    if (static_cast<int>(m.size()) > cap) throw ParseError("monomial longer than the cap");
    s.add_term(m, detail::json_rational(detail::require(t, "coeff")));
  }
  return s;
}

inline Json to_json(const CyclicSeries& c) {
  Json out = Json::array();
  c.for_each_term([&](int d, MonoKey key, const Rational& q) {
    Json word = Json::array();
    for (int a : unpack_mono(key, d)) word.push_back(a + 1);
    out.push_back({{"degree", d}, {"word", word}, {"coeff", to_string(q)}});
  });
  return out;
}

inline CyclicSeries cyclic_from_json(const Json& j, int rank, int cap) {
  if (!j.is_array()) throw ParseError("log must be an array");
  CyclicSeries c(rank, cap);
  for (const auto& e : j) {
    std::vector<int> w = detail::json_letters(detail::require(e, "word"), rank);
    int d = detail::json_int(detail::require(e, "degree"), "degree");
    if (d != static_cast<int>(w.size())) throw ParseError("degree does not match the word length");
    if (d > cap) continue;
    c.add(w, detail::json_rational(detail::require(e, "coeff")));
  }
  return c;
}

inline Json to_json(const K1Value& v) { return {{"det_eps", to_string(v.det_eps)}, {"log", to_json(v.log)}}; }

inline K1Value k1_from_json(const Json& j, int rank, int cap) {
  return {detail::json_rational(detail::require(j, "det_eps")), cyclic_from_json(detail::require(j, "log"), rank, cap)};
}

// Largest letter index in a K1Value JSON's log.
inline int max_letter_in(const Json& k1) {
  int m = 0;
  for (const auto& e : detail::require(k1, "log"))
    for (const auto& a : detail::require(e, "word")) m = std::max(m, detail::json_int(a, "letter"));
  return m;
}

inline Json to_json(const ExpansionAuto& s) {
  Json images = Json::object();
  for (int i = 0; i < s.rank(); ++i) images["g" + std::to_string(i + 1)] = to_json(s.images()[i]);
  return images;
}

inline Json to_json(const HomDerivation& f) {
  Json values = Json::object();
  for (std::size_t i = 0; i < f.values.size(); ++i) values["g" + std::to_string(i + 1)] = to_json(f.values[i]);
  return {{"degree", f.degree}, {"values", values}};
}

// ---------------------------------------------------------------------------

struct AutomorphismInput {
  int genus = 1;
  int cap = 1;
  ExpansionAuto sigma;
  std::optional<std::vector<GroupWord>> words;  // when every image was given as a word
};

inline AutomorphismInput automorphism_from_json(const Json& j, std::optional<int> cap_override = std::nullopt) {
  AutomorphismInput in;
  in.genus = detail::json_int(detail::require(j, "genus"), "genus");
  if (in.genus < 1) throw ParseError("genus must be >= 1");
  in.cap = cap_override ? *cap_override : detail::json_int(detail::require(j, "cap"), "cap");
  if (in.cap < 1) throw ParseError("cap must be >= 1");
  const int rank = 2 * in.genus;
  const Json& images = detail::require(j, "images");
  if (!images.is_object()) throw ParseError("images must be an object keyed g1..g2g");
  std::vector<Series> series;
  std::vector<GroupWord> words;
  bool all_words = true;
  MagnusExpansion theta = MagnusExpansion::standard(rank, in.cap);
  for (int i = 1; i <= rank; ++i) {
    std::string key = "g" + std::to_string(i);
    if (!images.contains(key)) throw ParseError("missing image of " + key);
    const Json& v = images.at(key);
    if (v.is_string()) {
      GroupWord w = parse_word(v.get<std::string>());
      if (w.max_index() > rank) throw ParseError("image of " + key + " uses a generator beyond g" + std::to_string(rank));
      words.push_back(w);
      series.push_back(theta.expand(w));
    } else {
      all_words = false;
      Series s = series_from_json(v, rank);
      if (s.cap() < in.cap) throw TruncationMismatch("image of " + key + " is truncated below the requested cap");
      series.push_back(s.truncated(in.cap));
    }
  }
  for (const auto& s : series)
    if (s.constant_term() != 1) throw BadAugmentation("automorphism images must have constant term 1");
  in.sigma = ExpansionAuto(std::move(series));
  if (all_words) in.words = std::move(words);
  return in;
}

struct PresentationInput {
  LabeledPresentation presentation;
  int cap = 1;
};

inline PresentationInput presentation_from_json(const Json& j, std::optional<int> cap_override = std::nullopt) {
  PresentationInput in;
  LabeledPresentation& p = in.presentation;
  p.genus = detail::json_int(detail::require(j, "genus"), "genus");
  if (p.genus < 1) throw ParseError("genus must be >= 1");
  in.cap = cap_override ? *cap_override : detail::json_int(detail::require(j, "cap"), "cap");
  if (in.cap < 1) throw ParseError("cap must be >= 1");
  p.minus = detail::json_names(detail::require(j, "minus"), "minus");
  p.plus = detail::json_names(detail::require(j, "plus"), "plus");
  if (j.contains("extra")) p.extra = detail::json_names(j.at("extra"), "extra");
  auto names = p.generators();
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ParseError("duplicate generator name");
  for (const auto& r : detail::require(j, "relators")) p.relators.push_back(parse_word(detail::json_string(r, "relator"), table_names(names)));
  return in;
}

inline Json to_json(const LabeledPresentation& p, int cap) {
  Json relators = Json::array();
  for (const auto& r : p.relators) relators.push_back(format_word(r, p.generators()));
  return {{"genus", p.genus}, {"cap", cap}, {"minus", p.minus}, {"plus", p.plus}, {"extra", p.extra}, {"relators", relators}};
}

struct ClasperInput {
  OneLoopClasper clasper;
  int genus = 1;
};

inline ClasperInput clasper_from_json(const Json& j, std::optional<int> genus_override = std::nullopt) {
  ClasperInput in;
  OneLoopClasper& c = in.clasper;
  c.degree = detail::json_int(detail::require(j, "degree"), "degree");
  for (const auto& w : detail::require(j, "leaves")) c.leaves.push_back(parse_word(detail::json_string(w, "leaf")));
  c.delta = j.contains("delta") ? parse_word(detail::json_string(j.at("delta"), "delta")) : GroupWord();
  if (j.contains("twists"))
    for (const auto& t : j.at("twists")) c.twists.push_back(detail::json_int(t, "twist"));
  else
    c.twists.assign(c.leaves.size(), 0);
  try {
    c.validate();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  int max_index = c.delta.max_index();
  for (const auto& w : c.leaves) max_index = std::max(max_index, w.max_index());
  if (genus_override)
    in.genus = *genus_override;
  else if (j.contains("genus"))
    in.genus = detail::json_int(j.at("genus"), "genus");
  else
    in.genus = std::max(1, (max_index + 1) / 2);
  if (in.genus < 1) throw ParseError("genus must be >= 1");
  if (max_index > 2 * in.genus) throw ParseError("clasper words use generators beyond the genus");
  return in;
}

inline Json to_json(const CylinderInvariant& inv) {
  Json out = to_json(inv.torsion);
  out["sigma"] = to_json(inv.sigma);
  out["tau1"] = inv.tau1 ? to_json(*inv.tau1) : Json(nullptr);
  Json h = Json::array();
  for (const auto& x : inv.euler_shift) h.push_back(x.get_str());
  out["euler_shift"] = h;
  out["defined_mod_h"] = inv.defined_mod_h;
  return out;
}

}  // namespace hcyl
