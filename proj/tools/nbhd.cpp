// nbhd: command-line front end for neighbourhood models with pointwise
// intersection.
//
// Exit status: 0 = property holds / proof accepted / artifact written,
//              1 = refuted (witness printed), 2 = usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nbhd/error.hpp"
#include "nbhd/frames.hpp"
#include "nbhd/logics.hpp"
#include "nbhd/model_io.hpp"
#include "nbhd/proof_io.hpp"
#include "nbhd/reproduce.hpp"
#include "nbhd/search.hpp"

using nlohmann::json;
using namespace nbhd;

namespace {

constexpr int kHolds = 0;
constexpr int kRefuted = 1;
constexpr int kUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

std::vector<Group> parse_pool(const std::string& text) {
  std::vector<Group> pool;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (item.find_first_not_of(" \t") != std::string::npos) pool.push_back(parse_group(item));
  if (pool.empty()) throw UsageError("--pool must name at least one group");
  return pool;
}

std::vector<AgentId> parse_agents(const std::string& text) {
  auto g = parse_group(text);
  return {g.members().begin(), g.members().end()};
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

SchemaMode parse_mode(const std::string& text) {
  if (text == "all-subsets" || text == "all") return SchemaMode::AllSubsets;
  if (text == "definable-only" || text == "definable") return SchemaMode::DefinableOnly;
  throw UsageError("--mode must be all-subsets or definable-only");
}

const char* mode_name(SchemaMode m) { return m == SchemaMode::AllSubsets ? "all-subsets" : "definable-only"; }

std::size_t resolve_world(const Domain& d, const std::string& text) { return d.index_of(text); }

json binding_json(const Domain& d, const SemanticBinding& b) {
  json j = json::object();
  auto group = [](const Group& g) {
    json arr = json::array();
    for (auto id : g.members()) arr.push_back(id.value);
    return arr;
  };
  if (b.G) j["G"] = group(*b.G);
  if (b.H) j["H"] = group(*b.H);
  if (b.J) j["J"] = group(*b.J);
  if (b.phi) j["phi"] = world_set_to_json(d, *b.phi);
  if (b.psi) j["psi"] = world_set_to_json(d, *b.psi);
  return j;
}

json counterexample_json(const Domain& d, const SchemaCounterexample& ce) {
  return {{"world", d.label(ce.world)}, {"binding", binding_json(d, ce.binding)}};
}

std::string describe(const Domain& d, const SchemaCounterexample& ce) {
  std::string b = format_binding(d, ce.binding);
  return (b.empty() ? std::string() : b + " ") + "at " + d.label(ce.world);
}

json schema_verdict_json(const Domain& d, const SchemaId& s, SchemaMode mode, const SchemaVerdict& v) {
  json j{{"schema", display_name(s)}, {"mode", mode_name(mode)}, {"valid", v.valid}};
  if (v.counterexample) j["counterexample"] = counterexample_json(d, *v.counterexample);
  if (v.all_subsets_counterexample)
    j["all_subsets_counterexample"] = counterexample_json(d, *v.all_subsets_counterexample);
  return j;
}

void emit(bool as_json, const json& j, const std::string& text) {
  if (as_json) std::cout << j.dump(2) << '\n';
  else std::cout << text;
}

// ---------------------------------------------------------------------------

int run_check(const std::string& model_path, const std::string& formula_text,
              const std::optional<std::string>& world, bool as_json) {
  const Model m = load_model(model_path);
  const Formula f = parse(formula_text);
  const Domain& d = m.domain();
  const WorldSet truth = truth_set(m, f);
  json j{{"formula", render(f)}, {"truth_set", world_set_to_json(d, truth)}};
  if (world) {
    const std::size_t w = resolve_world(d, *world);
    const bool holds = truth.contains(w);
    j["world"] = *world;
    j["holds"] = holds;
    emit(as_json, j, std::string(holds ? "true" : "false") + " at " + *world + "\n");
    return holds ? kHolds : kRefuted;
  }
  const bool valid = truth.is_full();
  j["valid"] = valid;
  std::string text = "truth set " + d.format(truth) + "\n";
  if (valid) {
    text += "valid on the model\n";
  } else {
    const auto w = static_cast<std::size_t>(std::countr_zero(truth.complement().bits()));
    j["false_at"] = d.label(w);
    text += "false at " + d.label(w) + "\n";
  }
  emit(as_json, j, text);
  return valid ? kHolds : kRefuted;
}

int run_schema(const std::string& model_path, const std::string& schema_text, const std::string& mode_text,
               const std::optional<std::string>& pool_text, bool as_json) {
  const Model m = load_model(model_path);
  const SchemaId s = parse_schema(schema_text);
  const SchemaMode mode = parse_mode(mode_text);
  const auto pool = pool_text ? parse_pool(*pool_text) : default_pool(m);
  const auto v = check_schema_semantically(m, s, mode, pool);
  const Domain& d = m.domain();
  json j = schema_verdict_json(d, s, mode, v);
  json pj = json::array();
  for (const auto& g : pool) pj.push_back(g.to_string());
  j["pool"] = pj;
  std::string text;
  if (v.valid) {
    text = "valid\n";
    if (v.all_subsets_counterexample)
      text += "note: all-subsets mode disagrees (non-definable sets): " +
              describe(d, *v.all_subsets_counterexample) + "\n";
  } else {
    text = "counterexample: " + describe(d, *v.counterexample) + "\n";
  }
  emit(as_json, j, text);
  return v.valid ? kHolds : kRefuted;
}

int run_frame(const std::string& model_path, const std::string& condition, bool as_json) {
  const Model m = load_model(model_path);
  const FrameCondition c = parse_condition(condition);
  const auto v = check_condition(m, c);
  const Domain& d = m.domain();
  json j{{"condition", to_string(c)}, {"holds", v.holds}, {"notes", v.notes}};
  std::string text;
  for (const auto& note : v.notes) text += "note: " + note + "\n";
  if (v.holds) {
    text += "holds\n";
  } else {
    j["witness"] = {{"world", d.label(v.witness->world)}, {"owner", v.witness->owner},
                    {"set", world_set_to_json(d, v.witness->set)}};
    text += "fails at " + d.label(v.witness->world) + " for " + v.witness->owner + " with set " +
            d.format(v.witness->set) + "\n";
  }
  emit(as_json, j, text);
  return v.holds ? kHolds : kRefuted;
}

int run_close(const std::string& model_path, const std::string& kind, const std::string& out, bool as_json) {
  const Model m = load_model(model_path);
  Model closed = m;
  if (kind == "supersets") closed = close_under_supersets(m);
  else if (kind == "intersections") closed = close_under_intersections(m);
  else throw UsageError("closure must be 'supersets' or 'intersections'");
  save_model(closed, out);
  emit(as_json, json{{"written", out}, {"closure", kind}}, "wrote " + out + "\n");
  return kHolds;
}

int run_proof(const std::string& path, bool as_json) {
  const ProofFile file = load_proof(path);
  const ProofVerdict v = check(file);
  json j{{"accepted", v.accepted}, {"lines", v.length}};
  if (!v.accepted) {
    j["line"] = v.line;
    j["reason"] = v.reason;
  }
  emit(as_json, j,
       v.accepted ? "accepted (" + std::to_string(v.length) + " lines)\n"
                  : "rejected at line " + std::to_string(v.line) + ": " + v.reason + "\n");
  return v.accepted ? kHolds : kRefuted;
}

int run_fixture(const std::string& name, const std::optional<std::string>& out) {
  const Model m = builtin_fixture(parse_fixture_id(name));
  if (out) {
    save_model(m, *out);
    std::cout << "wrote " << *out << '\n';
  } else {
    std::cout << model_to_json(m).dump(2) << '\n';
  }
  return kHolds;
}

int run_reproduce(const std::string& target, bool as_json) {
  if (target == "lemma3.1") {
    const auto rows = reproduce_independence();
    json jr = json::array();
    std::string text = "fixture  B1       B2       B3       B4\n";
    std::string details;
    bool ok = true;
    const char* names[4] = {"B1", "B2", "B3", "B4"};
    for (const auto& row : rows) {
      const Domain d = builtin_fixture(row.fixture).domain();
      json jrow{{"fixture", fixture_name(row.fixture)}, {"as_expected", row.as_expected()}};
      char line[128];
      std::snprintf(line, sizeof line, "%-8s", std::string(fixture_name(row.fixture)).c_str());
      text += line;
      for (std::size_t k = 0; k < 4; ++k) {
        const auto& v = row.verdicts[k];
        std::snprintf(line, sizeof line, " %-8s", v.valid ? "valid" : "refuted");
        text += line;
        jrow[names[k]] = schema_verdict_json(d, SchemaId{static_cast<SchemaId::Kind>(k), {}},
                                             SchemaMode::AllSubsets, v);
        if (!v.valid)
          details += std::string(fixture_name(row.fixture)) + " refutes " + names[k] + ": " +
                     describe(d, *v.counterexample) + "\n";
      }
      text += "\n";
      ok &= row.as_expected();
      jr.push_back(jrow);
    }
    text += details;
    text += ok ? "independence reproduced\n" : "MISMATCH: independence not reproduced\n";
    emit(as_json, json{{"target", target}, {"rows", jr}, {"reproduced", ok}}, text);
    return ok ? kHolds : kRefuted;
  }
  if (target == "sec5.2") {
    const auto r = reproduce_nonreflexive();
    const Domain d = builtin_fixture(FixtureId::NonReflexive).domain();
    const SchemaId tg{SchemaId::Kind::TG, {}};
    std::string text = "T_G, definable-only, pool {1};{2}: ";
    text += r.singletons.valid ? "valid\n" : "counterexample " + describe(d, *r.singletons.counterexample) + "\n";
    if (r.singletons.all_subsets_counterexample)
      text += "  (all-subsets mode would refute: " + describe(d, *r.singletons.all_subsets_counterexample) +
              "; those sets are not definable)\n";
    text += "T_G, definable-only, pool {1};{2};{1,2}: ";
    text += r.with_group.valid ? "valid\n" : "counterexample " + describe(d, *r.with_group.counterexample) + "\n";
    const bool ok = r.as_expected();
    text += ok ? "non-reflexive counterexample reproduced\n" : "MISMATCH: counterexample not reproduced\n";
    emit(as_json,
         json{{"target", target},
              {"singletons", schema_verdict_json(d, tg, SchemaMode::DefinableOnly, r.singletons)},
              {"with_group", schema_verdict_json(d, tg, SchemaMode::DefinableOnly, r.with_group)},
              {"reproduced", ok}},
         text);
    return ok ? kHolds : kRefuted;
  }
  throw UsageError("reproduce target must be lemma3.1 or sec5.2");
}

struct BoundsOptions {
  std::size_t worlds = 2;
  std::string agents = "1";
  std::string atoms;
  bool exhaustive = false;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> constraints;
};

SearchBounds make_bounds(const BoundsOptions& o) {
  SearchBounds b;
  b.max_worlds = o.worlds;
  b.agents = parse_agents(o.agents);
  b.atoms = split_names(o.atoms);
  for (const auto& c : o.constraints) b.constraints.push_back(parse_condition(c));
  if (o.exhaustive) {
    if (o.trials || o.seed) throw UsageError("--exhaustive cannot be combined with --trials/--seed");
    b.mode = SearchBounds::Exhaustive{};
  } else {
    if (!o.seed) throw UsageError("random search requires --seed (or use --exhaustive)");
    b.mode = SearchBounds::Random{o.trials.value_or(1000), *o.seed};
  }
  return b;
}

int run_valid(const std::optional<std::string>& formula_text, const std::optional<std::string>& schema_text,
              const std::string& mode_text, const std::optional<std::string>& pool_text,
              const BoundsOptions& bo, bool as_json) {
  if (formula_text.has_value() == schema_text.has_value())
    throw UsageError("give exactly one of --formula and --schema");
  const SearchBounds b = make_bounds(bo);
  SearchTarget target = formula_text ? SearchTarget(parse(*formula_text))
                                     : SearchTarget(SchemaTarget{parse_schema(*schema_text), parse_mode(mode_text),
                                                                 pool_text ? parse_pool(*pool_text) : std::vector<Group>{}});
  const auto found = find_countermodel(target, b);
  if (!found) {
    emit(as_json, json{{"countermodel", nullptr}}, "no countermodel within bounds (not a validity proof)\n");
    return kHolds;
  }
  const Domain& d = found->model.domain;
  json j{{"index", found->index}, {"model", model_to_json(found->model)}};
  std::string text = "countermodel found (" + std::string(b.is_random() ? "draw " : "model #") +
                     std::to_string(found->index) + ")";
  if (found->world) {
    j["world"] = d.label(*found->world);
    text += ", false at " + d.label(*found->world) + "\n";
  } else {
    j["witness"] = counterexample_json(d, *found->schema_witness);
    text += ": " + describe(d, *found->schema_witness) + "\n";
  }
  text += model_to_json(found->model).dump(2) + "\n";
  emit(as_json, j, text);
  return kRefuted;
}

int run_fuzz(const std::vector<std::string>& extensions, bool cg, const BoundsOptions& bo, bool as_json) {
  LogicDescriptor l;
  for (const auto& e : extensions) l.extensions.push_back(parse_schema(e));
  l.replace_b1_with_cg = cg;
  SearchBounds b = make_bounds(bo);
  if (!b.is_random()) throw UsageError("fuzz requires --trials and --seed");
  if (bo.constraints.empty()) b.constraints = constraints_for(l, b.agents, search_pool(b));
  const auto report = soundness_fuzz(l, b);
  json violations = json::array();
  std::string text = "trials " + std::to_string(report.trials) + ", violations " +
                     std::to_string(report.violations.size()) + "\n";
  for (const auto& v : report.violations) {
    const Domain& d = v.model.domain;
    violations.push_back({{"draw", v.draw},
                          {"model", model_to_json(v.model)},
                          {"schema", display_name(v.schema)},
                          {"witness", counterexample_json(d, v.witness)}});
    text += "draw " + std::to_string(v.draw) + ": " + display_name(v.schema) + " fails, " + describe(d, v.witness) + "\n";
  }
  emit(as_json, json{{"trials", report.trials}, {"violations", violations}}, text);
  return report.violations.empty() ? kHolds : kRefuted;
}

void add_bounds(CLI::App* cmd, BoundsOptions& o) {
  cmd->add_option("--worlds", o.worlds, "Maximum number of worlds")->capture_default_str();
  cmd->add_option("--agents", o.agents, "Agents, e.g. 1,2")->capture_default_str();
  cmd->add_option("--atoms", o.atoms, "Atoms, e.g. p,q");
  cmd->add_flag("--exhaustive", o.exhaustive, "Enumerate all models within bounds");
  cmd->add_option("--trials", o.trials, "Number of random models");
  cmd->add_option("--seed", o.seed, "Seed for random models (required in random mode)");
  cmd->add_option("--constraint", o.constraints, "Frame condition (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighbourhood models with pointwise intersection"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print machine-readable JSON");

  std::string model_path, formula_text, schema_text, mode_text = "all-subsets", condition, kind, out, file,
                                                      fixture, target;
  std::optional<std::string> world, pool, out_opt, formula_opt, schema_opt;
  std::vector<std::string> extensions;
  bool cg = false;
  BoundsOptions bounds;

  auto* check = app.add_subcommand("check", "Evaluate a formula on a model");
  check->add_option("--model", model_path, "Model file")->required();
  check->add_option("--formula", formula_text, "Formula")->required();
  check->add_option("--world", world, "World label");
  check->add_flag("--json", as_json);

  auto* valid = app.add_subcommand("valid", "Search for a countermodel to a formula or schema");
  valid->add_option("--formula", formula_opt, "Formula");
  valid->add_option("--schema", schema_opt, "Schema, e.g. B1, cg, pg");
  valid->add_option("--mode", mode_text, "all-subsets or definable-only")->capture_default_str();
  valid->add_option("--pool", pool, "Groups separated by ';', e.g. \"1;2;1,2\"");
  add_bounds(valid, bounds);
  valid->add_flag("--json", as_json);

  auto* schema = app.add_subcommand("schema", "Check an axiom schema on a model");
  schema->add_option("--model", model_path, "Model file")->required();
  schema->add_option("--schema", schema_text, "Schema, e.g. B3, tg, nec:1")->required();
  schema->add_option("--mode", mode_text, "all-subsets or definable-only")->capture_default_str();
  schema->add_option("--pool", pool, "Groups separated by ';'");
  schema->add_flag("--json", as_json);

  auto* frame = app.add_subcommand("frame", "Check a frame condition on a model");
  frame->add_option("--model", model_path, "Model file")->required();
  frame->add_option("--condition", condition,
                    "nec:i, conec:i, p:i, cop:i, pg:1,2, reflexive, bincons, monotone, intclosed")
      ->required();
  frame->add_flag("--json", as_json);

  auto* close = app.add_subcommand("close", "Close an agent model under supersets or intersections");
  close->add_option("--model", model_path, "Model file")->required();
  close->add_option("closure", kind, "supersets or intersections")->required();
  close->add_option("-o,--out", out, "Output model file")->required();
  close->add_flag("--json", as_json);

  auto* proof = app.add_subcommand("proof", "Check a proof or entailment certificate");
  proof->add_option("--file", file, "Proof file")->required();
  proof->add_flag("--json", as_json);

  auto* fix = app.add_subcommand("fixture", "Write a built-in model (M1..M4, NONREFLEXIVE)");
  fix->add_option("name", fixture, "Fixture name")->required();
  fix->add_option("-o,--out", out_opt, "Output file (stdout when omitted)");

  auto* repro = app.add_subcommand("reproduce", "Re-run the worked examples (lemma3.1, sec5.2)");
  repro->add_option("target", target, "lemma3.1 or sec5.2")->required();
  repro->add_flag("--json", as_json);

  auto* fuzz = app.add_subcommand("fuzz", "Soundness fuzzing of a logic on random models");
  fuzz->add_option("--extensions", extensions, "Extension schemas, e.g. tg nec:1")->delimiter(',');
  fuzz->add_flag("--cg", cg, "Replace B1 by C_G");
  add_bounds(fuzz, bounds);
  fuzz->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return run_check(model_path, formula_text, world, as_json);
    if (*valid) return run_valid(formula_opt, schema_opt, mode_text, pool, bounds, as_json);
    if (*schema) return run_schema(model_path, schema_text, mode_text, pool, as_json);
    if (*frame) return run_frame(model_path, condition, as_json);
    if (*close) return run_close(model_path, kind, out, as_json);
    if (*proof) return run_proof(file, as_json);
    if (*fix) return run_fixture(fixture, out_opt);
    if (*repro) return run_reproduce(target, as_json);
    if (*fuzz) return run_fuzz(extensions, cg, bounds, as_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
