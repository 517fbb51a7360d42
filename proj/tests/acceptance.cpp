// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbhd/error.hpp"
#include "nbhd/frames.hpp"
#include "nbhd/logics.hpp"
#include "nbhd/proof_io.hpp"
#include "nbhd/reproduce.hpp"
#include "nbhd/search.hpp"

using namespace nbhd;
using K = SchemaId::Kind;
using Clock = std::chrono::steady_clock;
using nlohmann::json;

namespace {

// Budgets and sample sizes.
constexpr double kReproduceBudgetSeconds = 1.0;
constexpr double kBaseFuzzBudgetSeconds = 60.0;
constexpr std::uint64_t kBaseFuzzTrials = 10'000;
constexpr std::uint64_t kExtensionTrials = 1'000;
constexpr std::uint64_t kClosureModels = 500;
constexpr std::size_t kMutations = 20;
constexpr std::uint64_t kOracleModels = 100;
constexpr std::uint64_t kTransferModels = 1'000;
constexpr std::uint64_t kSeed = 20261019;

const std::filesystem::path kProofDir = NBHD_DATA_DIR "/proofs";

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SearchBounds random_bounds(std::size_t worlds, std::vector<AgentId> agents, std::uint64_t trials,
                           std::uint64_t seed) {
  SearchBounds b;
  b.max_worlds = worlds;
  b.agents = std::move(agents);
  b.atoms = {"p", "q"};
  b.mode = SearchBounds::Random{trials, seed};
  return b;
}

const std::vector<AgentId> kThree{AgentId{1}, AgentId{2}, AgentId{3}};

// 1 ------------------------------------------------------------------------
Outcome independence() {
  const auto t0 = Clock::now();
  const auto rows = reproduce_independence();
  const double t = seconds_since(t0);
  bool ok = rows.size() == 4;
  for (const auto& r : rows) ok = ok && r.as_expected();
  // exact witness for the first fixture
  const auto& ce = rows.at(0).verdicts[0].counterexample;
  const Domain d = builtin_fixture(FixtureId::M1).domain();
  const std::string witness = ce ? format_binding(d, ce->binding) + " at " + d.label(ce->world) : "none";
  ok = ok && witness == "G={1}, H={2}, phi={wp,wr}, psi={wq,wr} at wp";
  ok = ok && t < kReproduceBudgetSeconds;
  char buf[256];
  std::snprintf(buf, sizeof buf, "M_k refutes only B_k; M1 witness %s; %.3fs", witness.c_str(), t);
  return {ok, buf};
}

// 2 ------------------------------------------------------------------------
Outcome nonreflexive() {
  const auto t0 = Clock::now();
  const auto r = reproduce_nonreflexive();
  const double t = seconds_since(t0);
  bool ok = r.as_expected() && t < kReproduceBudgetSeconds;
  // T_1 and T_2 separately
  const Model nr = builtin_fixture(FixtureId::NonReflexive);
  for (auto g : {Group{1}, Group{2}}) {
    const std::vector<Group> pool{g};
    ok = ok && check_schema_semantically(nr, {K::TG, {}}, SchemaMode::DefinableOnly, pool).valid;
  }
  const auto& ce = r.with_group.counterexample;
  ok = ok && ce && ce->world == 0 && ce->binding.phi && ce->binding.phi->is_empty() && ce->binding.G == Group{1, 2};
  ok = ok && satisfies(nr, 0, parse("[1,2]false"));
  char buf[160];
  std::snprintf(buf, sizeof buf, "T_1, T_2 valid; T_{1,2} refuted with phi={} at w; %.3fs", t);
  return {ok, buf};
}

// 3 ------------------------------------------------------------------------
Outcome base_fuzz() {
  const auto t0 = Clock::now();
  const auto report = soundness_fuzz(LogicDescriptor{}, random_bounds(4, kThree, kBaseFuzzTrials, kSeed));
  const double t = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu models, %zu violations, %.1fs",
                static_cast<unsigned long long>(report.trials), report.violations.size(), t);
  return {report.trials == kBaseFuzzTrials && report.violations.empty() && t < kBaseFuzzBudgetSeconds, buf};
}

// 4 ------------------------------------------------------------------------
Outcome extensions() {
  struct Pair {
    const char* name;
    LogicDescriptor logic;
  };
  auto ext = [](std::vector<SchemaId> s) { return LogicDescriptor{std::move(s), false}; };
  std::vector<Pair> pairs;
  for (auto i : kThree) {
    pairs.push_back({"NEC", ext({{K::Nec, i}})});
    pairs.push_back({"CONEC", ext({{K::Conec, i}})});
    pairs.push_back({"P", ext({{K::P, i}})});
    pairs.push_back({"COP", ext({{K::Cop, i}})});
    pairs.push_back({"D", ext({{K::DI, i}})});
  }
  pairs.push_back({"T_G", ext({{K::TG, {}}})});
  pairs.push_back({"RM_G", ext({{K::RMG, {}}})});
  pairs.push_back({"C_G", LogicDescriptor{{}, true}});
  pairs.push_back({"P_G", ext({{K::PG, {}}})});

  std::size_t violations = 0, checked = 0;
  std::string failed;
  std::uint64_t seed = kSeed;
  for (const auto& p : pairs) {
    auto b = random_bounds(4, kThree, kExtensionTrials, ++seed);
    b.constraints = constraints_for(p.logic, b.agents, search_pool(b));
    const auto report = soundness_fuzz(p.logic, b);
    checked += report.trials;
    if (!report.violations.empty()) {
      violations += report.violations.size();
      failed += std::string(" ") + p.name;
    }
  }
  return {violations == 0 && checked == pairs.size() * kExtensionTrials,
          std::to_string(pairs.size()) + " logics x " + std::to_string(kExtensionTrials) + " models, " +
              std::to_string(violations) + " violations" + failed};
}

// 5 ------------------------------------------------------------------------
Outcome p_nontransfer() {
  SearchBounds b;
  b.max_worlds = 2;
  b.agents = {AgentId{1}, AgentId{2}};
  b.constraints = {FrameCondition::p(AgentId{1}), FrameCondition::p(AgentId{2})};
  const std::vector<Group> pool{Group{1, 2}};
  const auto found = find_countermodel(SchemaTarget{{K::PG, {}}, SchemaMode::AllSubsets, pool}, b);
  bool ok = found.has_value();
  if (found) {
    const Model m(found->model);
    ok = ok && check_condition(m, b.constraints[0]).holds && check_condition(m, b.constraints[1]).holds;
    ok = ok && group_neighbourhood(m, Group{1, 2}, found->schema_witness->world).contains(m.domain().empty_set());
  }
  const Model nr = builtin_fixture(FixtureId::NonReflexive);
  const bool fixture_ok = check_condition(nr, b.constraints[0]).holds && check_condition(nr, b.constraints[1]).holds &&
                          !check_schema_semantically(nr, {K::PG, {}}, SchemaMode::AllSubsets, pool).valid;
  return {ok && fixture_ok, std::string("exhaustive countermodel ") + (found ? "#" + std::to_string(found->index) : "missing") +
                                "; NONREFLEXIVE " + (fixture_ok ? "also refutes P_{1,2}" : "does not refute")};
}

// 6 ------------------------------------------------------------------------
Outcome unrestricted_aggregation() {
  SearchBounds b;
  b.max_worlds = 2;
  b.agents = {AgentId{1}};
  const std::vector<Group> pool{Group{1}};
  const SchemaTarget target{{K::CG, {}}, SchemaMode::AllSubsets, pool};
  const auto found = find_countermodel(target, b);
  if (!found) return {false, "no countermodel"};
  const Model closed(close_under_intersections(found->model));
  const bool valid = check_schema_semantically(closed, target.schema, target.mode, pool).valid;
  return {valid, "countermodel #" + std::to_string(found->index) + " (" +
                     format_binding(found->model.domain, found->schema_witness->binding) + "); C_G " +
                     (valid ? "valid" : "still refuted") + " after intersection closure"};
}

// 7 ------------------------------------------------------------------------
bool extends(const AgentModel& big, const AgentModel& small) {
  for (const auto& [i, map] : small.agents)
    for (std::size_t w = 0; w < map.size(); ++w)
      if (!map[w].is_subfamily_of(big.family(i, w))) return false;
  return true;
}

Outcome closures() {
  const auto b = random_bounds(4, kThree, kClosureModels, kSeed + 7);
  const auto pool = search_pool(b);
  std::size_t failures = 0;
  for (std::uint64_t draw = 0; draw < kClosureModels; ++draw) {
    const AgentModel m = random_model(b, draw);
    // a pointwise submodel for the monotonicity law: drop the first set of
    // every nonempty family
    AgentModel sub = m;
    for (auto& [_, map] : sub.agents)
      for (auto& f : map)
        if (!f.empty()) f.erase(*f.begin());
    const AgentModel up = close_under_supersets(m), cap = close_under_intersections(m);
    bool ok = extends(up, m) && extends(cap, m);
    ok = ok && close_under_supersets(up) == up && close_under_intersections(cap) == cap;
    ok = ok && extends(up, close_under_supersets(sub)) && extends(cap, close_under_intersections(sub));
    ok = ok && check_condition(Model(up), FrameCondition::monotone()).holds;
    ok = ok && check_condition(Model(cap), FrameCondition::intersection_closed()).holds;
    ok = ok && check_schema_semantically(Model(up), {K::RMG, {}}, SchemaMode::AllSubsets, pool).valid;
    failures += !ok;
  }
  return {failures == 0, std::to_string(kClosureModels) + " models, " + std::to_string(failures) + " failures"};
}

// 8 ------------------------------------------------------------------------
json load_json(const char* name) {
  std::FILE* f = std::fopen((kProofDir / name).c_str(), "rb");
  if (!f) throw FormatError(std::string("missing ") + name);
  std::string text;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, f)) text.append(buf, got);
  std::fclose(f);
  return json::parse(text);
}

struct Mutation {
  const char* file;
  std::size_t expected_line;
  std::function<void(json&)> apply;
};

Outcome proofs() {
  const char* files[] = {"sa_from_nec.json", "b2_from_nec.json", "b3_from_nec.json", "b4_from_nec.json",
                         "entailment_b1.json"};
  std::size_t accepted = 0;
  for (const char* f : files) accepted += check(proof_from_json(load_json(f))).accepted;

  // B2-B4 are derived, so their proofs may only cite B1 and NEC by name.
  std::size_t stray = 0;
  for (const char* f : {"b2_from_nec.json", "b3_from_nec.json", "b4_from_nec.json"})
    for (const auto& line : load_json(f)["lines"]) {
      const auto& j = line["just"];
      if (j.value("type", "") != "axiom") continue;
      const std::string s = j.value("schema", "");
      stray += !(s == "b1" || s.rfind("nec:", 0) == 0);
    }

  auto formula = [](std::size_t line, const char* text) {
    return [=](json& j) { j["lines"][line - 1]["formula"] = text; };
  };
  auto just = [](std::size_t line, json value) {
    return [=](json& j) { j["lines"][line - 1]["just"] = value; };
  };
  const std::vector<Mutation> mutations{
      {"sa_from_nec.json", 1, formula(1, "[1]true")},
      {"sa_from_nec.json", 1, just(1, {{"type", "taut"}})},
      {"sa_from_nec.json", 2, formula(2, "([1]p & [2]true) -> [1,2](p & p)")},
      {"sa_from_nec.json", 2, just(2, {{"type", "axiom"}, {"schema", "b2"}})},
      {"sa_from_nec.json", 3, formula(3, "(p & true) <-> q")},
      {"sa_from_nec.json", 3, just(3, {{"type", "axiom"}})},
      {"sa_from_nec.json", 4, just(4, {{"type", "re"}, {"from", 3}, {"group", {1}}})},
      {"sa_from_nec.json", 4, just(4, {{"type", "re"}, {"from", 2}, {"group", {1, 2}}})},
      {"sa_from_nec.json", 5, formula(5, "[2]true -> [1]p")},
      {"sa_from_nec.json", 6, just(6, {{"type", "mp"}, {"from", {2, 5}}})},
      {"sa_from_nec.json", 6, just(6, {{"type", "mp"}, {"from", {1, 7}}})},
      {"sa_from_nec.json", 7, just(7, {{"type", "mp"}, {"from", {7, 6}}})},
      {"sa_from_nec.json", 8, formula(8, "[1]p -> [1,2]q")},
      {"sa_from_nec.json", 8, just(8, {{"type", "mp"}, {"from", {7, 4}}})},
      {"b2_from_nec.json", 1, just(1, {{"type", "axiom"}, {"schema", "nec:2"}})},
      {"b2_from_nec.json", 3, formula(3, "[1,2]true -> [2]true")},
      {"b3_from_nec.json", 9, formula(9, "([1]p -> [1,2]p) -> (([1]p & [1,2,3]p) -> [1,3]p)")},
      {"b3_from_nec.json", 10, just(10, {{"type", "mp"}, {"from", {9, 8}}})},
      {"b4_from_nec.json", 1, [](json& j) { j["logic"]["extensions"] = json::array(); }},
      {"entailment_b1.json", 1, [](json& j) { j["premises"] = {"[2]q", "[1]p"}; }},
  };
  std::size_t caught = 0;
  std::string misses;
  for (std::size_t k = 0; k < mutations.size(); ++k) {
    const auto& m = mutations[k];
    json doc = load_json(m.file);
    m.apply(doc);
    const auto v = check(proof_from_json(doc));
    if (!v.accepted && v.line == m.expected_line) ++caught;
    else misses += " #" + std::to_string(k + 1);
  }
  const std::size_t n = std::size(files);
  return {accepted == n && stray == 0 && mutations.size() == kMutations && caught == kMutations,
          std::to_string(accepted) + "/" + std::to_string(n) + " fixtures accepted, " + std::to_string(caught) + "/" +
              std::to_string(mutations.size()) + " mutations rejected at the mutated line, " +
              std::to_string(stray) + " derived-proof axioms outside B1/NEC" + misses};
}

// 9 ------------------------------------------------------------------------
// Brute force: every syntactic instance built from witness formulas must be
// valid exactly when the semantic check says so.
bool instances_valid(const Model& m, const SchemaId& s, std::span<const Group> pool, const DefinableSets& ds) {
  const auto mv = metavariables(s.kind);
  const auto sets = ds.sets();
  std::vector<Formula> witnesses;
  for (auto x : sets) witnesses.push_back(ds.witness(x));
  std::vector<std::size_t> gi(3, 0), si(2, 0);
  const std::size_t ng = mv.groups, ns = mv.sets;
  std::size_t tuples = 1;
  for (std::size_t k = 0; k < ng; ++k) tuples *= pool.size();
  for (std::size_t k = 0; k < ns; ++k) tuples *= witnesses.size();
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rest = t;
    SyntacticBinding b;
    std::optional<Group>* groups[3] = {&b.G, &b.H, &b.J};
    std::optional<Formula>* forms[2] = {&b.phi, &b.psi};
    for (std::size_t k = 0; k < ng; ++k) {
      *groups[k] = pool[rest % pool.size()];
      rest /= pool.size();
    }
    for (std::size_t k = 0; k < ns; ++k) {
      *forms[k] = witnesses[rest % witnesses.size()];
      rest /= witnesses.size();
    }
    if (s.kind == K::B1 && !b.G->is_disjoint_from(*b.H)) continue;
    if (!valid_on_model(m, instantiate_schema(s, b))) return false;
  }
  return true;
}

Outcome oracle_equivalence() {
  const std::vector<SchemaId> schemas{{K::B1, {}}, {K::B2, {}}, {K::B3, {}}, {K::B4, {}},
                                      {K::TG, {}}, {K::RMG, {}}, {K::CG, {}}};
  auto b = random_bounds(3, kThree, kOracleModels, kSeed + 9);
  b.atoms.clear();
  const auto pool = search_pool(b);
  std::size_t agree = 0, total = 0, refuted = 0;
  for (std::uint64_t draw = 0; draw < kOracleModels; ++draw) {
    AgentModel am = random_model(b, draw);
    for (std::size_t w = 0; w < am.domain.size(); ++w)
      am.valuation["s" + std::to_string(w)] = WorldSet::singleton(am.domain.size(), w);
    const Model m(am);
    const auto ds = definable_sets(m, pool);
    if (ds.size() != (std::size_t{1} << am.domain.size())) return {false, "a subset was not definable"};
    for (const auto& s : schemas) {
      const bool semantic = check_schema_semantically(m, s, SchemaMode::AllSubsets, pool).valid;
      const bool definable = check_schema_semantically(m, s, SchemaMode::DefinableOnly, pool).valid;
      const bool syntactic = instances_valid(m, s, pool, ds);
      agree += semantic == syntactic && definable == syntactic;
      refuted += !syntactic;
      ++total;
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " (model, schema) verdicts agree, " +
                              std::to_string(refuted) + " of them refutations"};
}

// 10 -----------------------------------------------------------------------
Outcome transfer() {
  const auto b = random_bounds(4, kThree, kTransferModels, kSeed + 10);
  const auto pool = search_pool(b);
  std::size_t premises = 0, failures = 0;
  for (std::uint64_t draw = 0; draw < kTransferModels; ++draw) {
    const AgentModel am = random_model(b, draw);
    const Model m(am);
    const WorldSet all = am.domain.full_set(), none = am.domain.empty_set();
    for (const auto& g : pool)
      for (std::size_t w = 0; w < am.domain.size(); ++w) {
        bool nec = true, cop = true, conec = true;
        for (auto i : g.members()) {
          const Family& f = am.family(i, w);
          nec = nec && f.contains(all);
          cop = cop && f.contains(none);
          conec = conec && !f.contains(all);
        }
        const Family fg = group_neighbourhood(m, g, w);
        premises += nec + cop + conec;
        failures += (nec && !fg.contains(all)) + (cop && !fg.contains(none)) + (conec && fg.contains(all));
      }
  }
  return {failures == 0 && premises > 0, std::to_string(premises) + " instances with the premise, " +
                                             std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"independence of B1-B4", independence},
      {"non-reflexive counterexample", nonreflexive},
      {"base soundness fuzz", base_fuzz},
      {"extension soundness", extensions},
      {"P does not transfer to groups", p_nontransfer},
      {"unrestricted aggregation", unrestricted_aggregation},
      {"closure properties", closures},
      {"proof fixtures and mutations", proofs},
      {"oracle equivalence", oracle_equivalence},
      {"NEC, COP, CONEC transfer to groups", transfer},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
