// hcyl: torsion, surgery, johnson, compare and verify subcommands.
// JSON goes to stdout (or --out); a short human summary goes to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "hcyl/clasper.hpp"
#include "hcyl/cylinder.hpp"
#include "hcyl/johnson_es.hpp"
#include "hcyl/json_io.hpp"
#include "hcyl/verify.hpp"

namespace {

using hcyl::Json;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<int> genus;
  std::optional<int> cap;
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  int trials = 64;
  bool oracle = false;
  std::string out;
  int jobs = std::max(1u, std::thread::hardware_concurrency());
};

struct Outcome {
  Json report;
  std::string summary;
  bool ok = true;
};

const std::string& single_input(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw hcyl::ParseError(cfg.command + " takes exactly one --in file");
  return cfg.inputs.front();
}

Outcome run_torsion(const RunConfig& cfg) {
  auto in = hcyl::presentation_from_json(hcyl::read_json_file(single_input(cfg)), cfg.cap);
  if (cfg.genus && *cfg.genus != in.presentation.genus) throw hcyl::ParseError("--genus disagrees with the input");
  hcyl::CylinderInvariant inv = hcyl::torsion(in.presentation, in.cap);
  Json report = hcyl::to_json(inv);
  std::string summary = "torsion at cap " + std::to_string(in.cap) + ": det_eps " + hcyl::to_string(inv.torsion.det_eps) +
                        ", " + std::to_string(report["log"].size()) + " cyclic terms";
  if (inv.defined_mod_h) summary += " (defined up to H: not Torelli)";
  return {report, summary, true};
}

// Degree-d value of -1/2 p+ on the torsion of M composed with its mirror.
hcyl::CyclicSeries mirror_double_value(const hcyl::LabeledPresentation& p, int d, int cap) {
  hcyl::CylinderInvariant doubled = hcyl::torsion(hcyl::compose(p, hcyl::mirror(p)), cap);
  return hcyl::Rational(-1, 2) * hcyl::p_plus(doubled.torsion.log.degree_part(d));
}

Outcome run_surgery(const RunConfig& cfg) {
  auto in = hcyl::clasper_from_json(hcyl::read_json_file(single_input(cfg)), cfg.genus);
  const int cap = cfg.cap.value_or(in.clasper.degree + 2);
  if (cap < 1) throw hcyl::ParseError("cap must be >= 1");
  hcyl::K1Value formula = hcyl::surgery_factor(in.clasper, in.genus, cap);
  Json report{{"degree", in.clasper.degree}, {"genus", in.genus}, {"cap", cap}, {"formula", hcyl::to_json(formula)}};
  std::string summary = "1-loop surgery factor of degree " + std::to_string(in.clasper.degree) + " at cap " +
                        std::to_string(cap) + ": " + std::to_string(report["formula"]["log"].size()) + " cyclic terms";
  bool ok = true;
  hcyl::LabeledPresentation surgered = hcyl::one_loop_presentation(in.clasper, in.genus);
  if (cfg.oracle) {
    hcyl::CylinderInvariant after = hcyl::torsion(surgered, cap);
    hcyl::CylinderInvariant before = hcyl::torsion(hcyl::one_loop_presentation(in.clasper, in.genus, false), cap);
    hcyl::K1Value difference{after.torsion.det_eps / before.torsion.det_eps, after.torsion.log - before.torsion.log};
    ok = difference == formula;
    report["oracle"] = {{"after", hcyl::to_json(after.torsion)},
                        {"before", hcyl::to_json(before.torsion)},
                        {"difference", hcyl::to_json(difference)},
                        {"status", ok ? "PASS" : "FAIL"}};
    summary += std::string("; presentation oracle ") + (ok ? "agrees" : "DISAGREES");
  }
  if (in.clasper.degree <= cap)
    report["mirror_double_plus_part"] = {
        {"degree", in.clasper.degree},
        {"value", hcyl::to_json(mirror_double_value(surgered, in.clasper.degree, cap))}};
  return {report, summary, ok};
}

Outcome run_johnson(const RunConfig& cfg) {
  auto in = hcyl::automorphism_from_json(hcyl::read_json_file(single_input(cfg)), cfg.cap);
  if (cfg.genus && *cfg.genus != in.genus) throw hcyl::ParseError("--genus disagrees with the input");
  auto depth = hcyl::ia_degree(in.sigma);
  Json report{{"genus", in.genus}, {"cap", in.cap}};
  if (!depth) {
    report["ia_degree"] = nullptr;
    report["tau"] = nullptr;
    report["trace"] = nullptr;
    return {report, "automorphism is trivial up to the cap", true};
  }
  report["ia_degree"] = *depth;
  if (*depth + 1 > in.cap) throw hcyl::TruncationMismatch("tau_" + std::to_string(*depth) + " needs cap >= " +
                                                          std::to_string(*depth + 1));
  hcyl::HomDerivation t = hcyl::tau(in.sigma, *depth);
  hcyl::CyclicSeries tr = hcyl::es_trace(t);
  report["tau"] = hcyl::to_json(t);
  report["trace"] = hcyl::to_json(tr);
  return {report, "tau_" + std::to_string(*depth) + " computed; trace has " + std::to_string(report["trace"].size()) + " terms",
          true};
}

Outcome run_compare(const RunConfig& cfg) {
  if (cfg.inputs.size() != 2) throw hcyl::ParseError("compare takes two --in files");
  Json a = hcyl::read_json_file(cfg.inputs[0]), b = hcyl::read_json_file(cfg.inputs[1]);
  int rank = std::max({1, hcyl::max_letter_in(a), hcyl::max_letter_in(b), cfg.genus ? 2 * *cfg.genus : 0});
  int cap = 1;
  for (const Json* j : {&a, &b})
    for (const auto& e : hcyl::detail::require(*j, "log"))
      cap = std::max(cap, hcyl::detail::json_int(hcyl::detail::require(e, "degree"), "degree"));
  if (cfg.cap) cap = *cfg.cap;
  hcyl::K1Value x = hcyl::k1_from_json(a, rank, cap), y = hcyl::k1_from_json(b, rank, cap);
  if (x.det_eps == 0 || y.det_eps == 0) throw hcyl::ParseError("det_eps must be nonzero");
  hcyl::K1Value diff = x * y.inverse();
  bool equal = x == y;
  Json report{{"cap", cap}, {"equal", equal}, {"det_eps_ratio", hcyl::to_string(diff.det_eps)}, {"log_difference", hcyl::to_json(diff.log)}};
  return {report, equal ? "invariants agree" : "invariants differ in " + std::to_string(report["log_difference"].size()) + " terms",
          equal};
}

Outcome run_verify(const RunConfig& cfg) {
  hcyl::VerifyConfig vc;
  vc.cap = cfg.cap.value_or(4);
  vc.genus = cfg.genus.value_or(1);
  vc.seed = cfg.seed;
  vc.trials = cfg.trials;
  vc.jobs = cfg.jobs;
  std::vector<std::string> names = cfg.suites;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) names = hcyl::suite_names();
  Json suites = Json::array();
  bool ok = true;
  std::string summary;
  for (const auto& name : names) {
    hcyl::SuiteReport r = hcyl::run_suite(name, vc);
    ok = ok && r.passed();
    suites.push_back(hcyl::to_json(r));
    for (const auto& c : r.checks) {
      summary += (c.passed() ? "PASS " : "FAIL ") + name + ": " + c.name;
      if (c.counterexample) summary += "\n     first counterexample: " + *c.counterexample;
      summary += "\n";
    }
  }
  if (!summary.empty()) summary.pop_back();
  Json report{{"seed", cfg.seed}, {"trials", cfg.trials}, {"cap", vc.cap}, {"status", ok ? "PASS" : "FAIL"}, {"suites", suites}};
  return {report, summary, ok};
}

void emit(const RunConfig& cfg, const Outcome& o) {
  std::string text = o.report.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw hcyl::ParseError("cannot write " + cfg.out);
    f << text;
  }
  std::cerr << o.summary << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact K1-valued torsion of homology cylinders"};
  app.require_subcommand(1);
  RunConfig cfg;
  int genus = 0, cap = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--in", cfg.inputs, "input JSON file(s)");
    sub->add_option("--cap", cap, "truncation degree D")->check(CLI::PositiveNumber);
    sub->add_option("--genus", genus, "surface genus g")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "write the JSON report here instead of stdout");
    sub->add_option("--jobs", cfg.jobs, "work pool width")->check(CLI::PositiveNumber);
  };
  auto* torsion = app.add_subcommand("torsion", "presentation -> torsion, sigma, tau_1");
  common(torsion);
  auto* surgery = app.add_subcommand("surgery", "1-loop clasper -> surgery factor");
  common(surgery);
  surgery->add_flag("--oracle", cfg.oracle, "cross-check against the compiled presentation");
  auto* johnson = app.add_subcommand("johnson", "automorphism -> tau_d and its trace");
  common(johnson);
  auto* compare = app.add_subcommand("compare", "exact difference of two K1 values");
  common(compare);
  auto* verify = app.add_subcommand("verify", "randomized property suites");
  common(verify);
  verify->add_option("--suite", cfg.suites, "suite name(s) or all")->delimiter(',');
  verify->add_option("--seed", cfg.seed, "base seed");
  verify->add_option("--trials", cfg.trials, "trials per check")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (genus > 0) cfg.genus = genus;
  if (cap > 0) cfg.cap = cap;
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    Outcome o;
    if (cfg.command == "torsion") o = run_torsion(cfg);
    else if (cfg.command == "surgery") o = run_surgery(cfg);
    else if (cfg.command == "johnson") o = run_johnson(cfg);
    else if (cfg.command == "compare") o = run_compare(cfg);
    else o = run_verify(cfg);
    emit(cfg, o);
    return o.ok ? 0 : 1;
  } catch (const hcyl::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 2;
  } catch (const hcyl::Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}
