// Batch front end: frame checking, model checking, frame sweeps, the
// finite/cofinite counterexample suite, and proof checking, with
// machine-readable reports.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckl/algebra.hpp"
#include "ckl/cofinite.hpp"
#include "ckl/formula.hpp"
#include "ckl/kripke.hpp"
#include "ckl/proof.hpp"

namespace {

using nlohmann::json;

struct Report {
  std::string command;
  bool pass = true;
  std::vector<json> witnesses;  // nonempty whenever pass is false
  json data = json::object();
  double timing_ms = 0;
};

class Timer {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

json report_to_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["witnesses"] = r.witnesses;
  j["timing_ms"] = r.timing_ms;
  j["data"] = r.data;
  return j;
}

int emit(const Report& r, bool as_json) {
  if (as_json) {
    std::cout << report_to_json(r).dump(2) << "\n";
  } else {
    for (const auto& w : r.witnesses) std::cout << "  witness: " << w.dump() << "\n";
    std::cout << r.command << ": " << (r.pass ? "PASS" : "FAIL") << " ("
              << r.timing_ms << " ms)\n";
  }
  return r.pass ? 0 : 1;
}

json world_list(int worlds, std::uint64_t set) {
  json out = json::array();
  for (int i = 0; i < worlds; ++i)
    if (set >> i & 1) out.push_back(i);
  return out;
}

json pair_list(const std::vector<std::pair<int, int>>& pairs) {
  json out = json::array();
  for (auto [i, j] : pairs) out.push_back(json::array({i, j}));
  return out;
}

// ---------------------------------------------------------------------------

Report cmd_check_frame(const std::string& path) {
  Timer timer;
  Report r;
  r.command = "check-frame";
  const ckl::KripkeModel model = ckl::load_model(path);
  const ckl::Frame& frame = model.frame;
  const ckl::FrameClassification c = ckl::classify_frame(frame);
  r.data["ckl_frame"] = c.ckl_frame;
  r.data["schemas_valid"] = c.schemas_valid;
  r.data["mh_algebra"] = c.mh_algebra;
  r.data["ckl_algebra"] = c.ckl_algebra;
  r.data["agreement"] = c.agree();
  r.pass = c.ckl_frame && c.agree();
  if (!c.ckl_frame) {
    const ckl::Relation closure = frame.e_rel().reflexive_transitive_closure();
    std::vector<std::pair<int, int>> missing, extra;
    for (auto p : closure.pairs())
      if (!frame.c_rel().contains(p.first, p.second)) missing.push_back(p);
    for (auto p : frame.c_rel().pairs())
      if (!closure.contains(p.first, p.second)) extra.push_back(p);
    r.witnesses.push_back({{"kind", "closure_diff"},
                           {"missing_from_r_c", pair_list(missing)},
                           {"extra_in_r_c", pair_list(extra)}});
    const ckl::FiniteModalAlgebra alg = ckl::complex_algebra(frame);
    if (auto v = ckl::mh_violation(alg))
      r.witnesses.push_back({{"kind", "mh_axiom"},
                             {"axiom", v->axiom},
                             {"witness", world_list(frame.worlds(), v->witness)}});
    if (auto v = ckl::ckl_violation(alg))
      r.witnesses.push_back({{"kind", "ckl_condition"},
                             {"condition", v->axiom},
                             {"witness", world_list(frame.worlds(), v->witness)}});
  }
  if (!c.agree()) r.witnesses.push_back({{"kind", "predicate_disagreement"}});
  r.timing_ms = timer.elapsed_ms();
  return r;
}

Report cmd_model_check(const std::string& path, const std::string& formula_text) {
  Timer timer;
  Report r;
  r.command = "model-check";
  const ckl::KripkeModel model = ckl::load_model(path);
  const ckl::Formula f = ckl::parse(formula_text, model.frame.agents());
  const std::uint64_t result = ckl::eval(model, f);
  r.data["formula"] = ckl::to_string(f);
  r.data["worlds"] = world_list(model.frame.worlds(), result);
  r.data["holds_everywhere"] = result == model.frame.world_mask();
  r.timing_ms = timer.elapsed_ms();
  return r;
}

Report cmd_sweep(int worlds, int agent_count, std::uint64_t seed, std::int64_t samples) {
  Timer timer;
  Report r;
  r.command = "sweep";
  const ckl::AgentSet agents = ckl::AgentSet::range(agent_count);
  const int bits = worlds * worlds * (agent_count + 1);
  const bool exhaustive = bits <= 16;
  ckl::FrameStream stream = exhaustive
                                ? ckl::FrameStream::exhaustive(agents, worlds)
                                : ckl::FrameStream::sampled(agents, worlds, seed, samples);
  std::int64_t index = 0, ckl_frames = 0, disagreements = 0;
  while (auto frame = stream.next()) {
    const ckl::FrameClassification c = ckl::classify_frame(*frame);
    if (c.ckl_frame) ++ckl_frames;
    if (!c.agree()) {
      ++disagreements;
      if (r.witnesses.size() < 10) {
        json w = ckl::model_to_json({*frame, {}});
        w["frame_index"] = index;
        w["ckl_frame"] = c.ckl_frame;
        w["schemas_valid"] = c.schemas_valid;
        w["mh_algebra"] = c.mh_algebra;
        w["ckl_algebra"] = c.ckl_algebra;
        r.witnesses.push_back(std::move(w));
      }
    }
    ++index;
  }
  r.data["mode"] = exhaustive ? "exhaustive" : "sampled";
  r.data["frames"] = index;
  r.data["ckl_frames"] = ckl_frames;
  r.data["disagreements"] = disagreements;
  if (!exhaustive) r.data["seed"] = seed;
  r.pass = disagreements == 0;
  r.timing_ms = timer.elapsed_ms();
  return r;
}

Report cmd_counterexample(int bound, long sampled_pairs, std::uint64_t seed, bool as_json) {
  Timer timer;
  Report r;
  r.command = "counterexample";
  ckl::FcSuiteOptions options;
  options.family_bits = bound;
  options.full_pair_bits = std::min(bound, 8);
  options.sampled_pairs = sampled_pairs;
  options.seed = seed;
  const ckl::FcSuiteReport suite = ckl::run_fc_suite(options);

  // Iterate table in the style of an even-position grid.
  const int table_rows = std::min(bound, 8);
  const ckl::FcAlgebra alg{2};
  json table = json::array();
  if (!as_json) std::cout << "E-orbit of a = " << ckl::element_a().to_string() << ":\n";
  ckl::FcSet it = ckl::element_a();
  for (int n = 0; n <= table_rows; ++n) {
    table.push_back(it.to_string());
    if (!as_json) {
      std::cout << "  E^" << n << " a = " << it.to_string() << "  |";
      for (unsigned i = 0; i <= static_cast<unsigned>(2 * table_rows + 2); i += 2)
        std::cout << ' ' << (it.at(i) ? '1' : '0');
      std::cout << " (even positions)\n";
    }
    it = ckl::e_of(alg, it);
  }
  r.data["iterates"] = std::move(table);
  r.data["checks"] = suite.checks;
  r.pass = suite.pass;
  for (const auto& failure : suite.failures) r.witnesses.push_back({{"failure", failure}});
  r.timing_ms = timer.elapsed_ms();
  return r;
}

Report cmd_check_proof(const std::string& path, int agent_count) {
  Timer timer;
  Report r;
  r.command = "check-proof";
  const ckl::AgentSet agents = ckl::AgentSet::range(agent_count);
  const ckl::Proof proof = ckl::load_proof_script(path, agents);
  const ckl::ProofVerdict verdict = ckl::check_proof(proof);
  r.data["lines"] = proof.lines.size();
  if (!proof.lines.empty())
    r.data["conclusion"] = ckl::to_string(proof.lines.back().formula);
  r.pass = verdict.accepted;
  if (!verdict.accepted)
    r.witnesses.push_back({{"line", verdict.line}, {"reason", verdict.reason}});
  r.timing_ms = timer.elapsed_ms();
  return r;
}

Report cmd_parse(const std::string& formula_text, int agent_count) {
  Timer timer;
  Report r;
  r.command = "parse";
  const ckl::AgentSet agents = ckl::AgentSet::range(agent_count);
  const ckl::Formula f = ckl::parse(formula_text, agents);
  r.data["canonical"] = ckl::to_string(f);
  r.data["expanded"] = ckl::to_string(ckl::expand(f, agents));
  r.data["variables"] = ckl::variables(f);
  r.pass = ckl::parse(ckl::to_string(f), agents) == f;
  if (!r.pass) r.witnesses.push_back({{"kind", "round_trip_failure"}});
  r.timing_ms = timer.elapsed_ms();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for common knowledge logic: Kripke frames, modal algebras, proofs"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "emit the report as JSON");

  std::string path, formula_text;
  int agent_count = 2;
  int worlds = 2;
  int bound = 12;
  std::uint64_t seed = 0;
  std::int64_t samples = 10000;
  long pair_samples = 100000;

  auto* check_frame = app.add_subcommand("check-frame", "closure and axiom checks for a frame file");
  check_frame->add_option("path", path, "model/frame JSON file")->required();

  auto* model_check = app.add_subcommand("model-check", "evaluate a formula in a model file");
  model_check->add_option("path", path, "model JSON file")->required();
  model_check->add_option("formula", formula_text, "formula text")->required();

  auto* sweep = app.add_subcommand("sweep", "classify all (or sampled) frames of a given size");
  sweep->add_option("-n,--worlds", worlds, "world count")->required();
  sweep->add_option("--agents", agent_count, "number of agents (default 2)");
  sweep->add_option("--seed", seed, "sampling seed (default 0)");
  sweep->add_option("--samples", samples, "sample count when too large to enumerate");

  auto* counterexample =
      app.add_subcommand("counterexample", "law suite for the finite/cofinite algebra");
  counterexample->add_option("--bound", bound, "support width of the element family (default 12)")
      ->check(CLI::Range(1, 16));
  counterexample->add_option("--samples", pair_samples, "sampled law pairs (default 100000)");
  counterexample->add_option("--seed", seed, "pair sampling seed");

  auto* check_proof = app.add_subcommand("check-proof", "check a proof script");
  check_proof->add_option("path", path, "proof script file")->required();
  check_proof->add_option("--agents", agent_count, "number of agents (default 2)");

  auto* parse_cmd = app.add_subcommand("parse", "parse a formula and print canonical forms");
  parse_cmd->add_option("formula", formula_text, "formula text")->required();
  parse_cmd->add_option("--agents", agent_count, "number of agents (default 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Report r;
    if (*check_frame)
      r = cmd_check_frame(path);
    else if (*model_check)
      r = cmd_model_check(path, formula_text);
    else if (*sweep)
      r = cmd_sweep(worlds, agent_count, seed, samples);
    else if (*counterexample)
      r = cmd_counterexample(bound, pair_samples, seed, as_json);
    else if (*check_proof)
      r = cmd_check_proof(path, agent_count);
    else
      r = cmd_parse(formula_text, agent_count);
    return emit(r, as_json);
  } catch (const ckl::ParseError& e) {
    std::cerr << "error: " << e.what() << " (at offset " << e.position << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
