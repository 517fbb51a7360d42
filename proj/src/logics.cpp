#include "nbhd/logics.hpp"

#include <algorithm>
#include <cctype>

#include "nbhd/error.hpp"
#include "nbhd/limits.hpp"

namespace nbhd {

using K = SchemaId::Kind;
using F = Formula;

// ---------------------------------------------------------------------------
// Names

namespace {

struct SchemaName {
  K kind;
  const char* key;
  const char* display;
  bool takes_agent;
};

constexpr SchemaName kNames[] = {
    {K::B1, "b1", "B1", false},       {K::B2, "b2", "B2", false},
    {K::B3, "b3", "B3", false},       {K::B4, "b4", "B4", false},
    {K::Nec, "nec", "NEC", true},     {K::Conec, "conec", "CONEC", true},
    {K::P, "p", "P", true},           {K::Cop, "cop", "COP", true},
    {K::PG, "pg", "P_G", false},      {K::TG, "tg", "T_G", false},
    {K::DI, "di", "D", true},         {K::RMG, "rmg", "RM_G", false},
    {K::CG, "cg", "C_G", false},      {K::SA, "sa", "SA", false},
};

const SchemaName& name_of(K kind) {
  for (const auto& n : kNames)
    if (n.kind == kind) return n;
  throw SchemaError("unknown schema kind");
}

}  // namespace

SchemaId parse_schema(std::string_view text) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  for (const auto& n : kNames) {
    if (head != n.key) continue;
    if (!n.takes_agent) {
      if (colon != std::string::npos) break;
      return SchemaId{n.kind, std::nullopt};
    }
    if (colon == std::string::npos) throw ParseError("schema '" + t + "' needs an agent, e.g. " + n.key + ":1", t.size());
    const std::string arg = t.substr(colon + 1);
    if (arg.empty() || arg.size() > 9 || arg.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("agent id '" + arg + "' is not a non-negative integer", colon + 1);
    return SchemaId{n.kind, AgentId{static_cast<std::uint32_t>(std::stoul(arg))}};
  }
  throw ParseError("unknown schema '" + std::string(text) + "'", 0);
}

std::string display_name(const SchemaId& s) {
  const auto& n = name_of(s.kind);
  std::string out = n.display;
  if (n.takes_agent) out += "(" + std::to_string(s.agent.value().value) + ")";
  return out;
}

std::string schema_key(const SchemaId& s) {
  const auto& n = name_of(s.kind);
  std::string out = n.key;
  if (n.takes_agent) out += ":" + std::to_string(s.agent.value().value);
  return out;
}

Metavariables metavariables(K kind) {
  switch (kind) {
    case K::B1:
    case K::CG:
    case K::B4: return {2, 2};
    case K::B2: return {2, 0};
    case K::B3: return {3, 1};
    case K::Nec:
    case K::Conec:
    case K::P:
    case K::Cop: return {0, 0};
    case K::PG: return {1, 0};
    case K::TG: return {1, 1};
    case K::DI: return {0, 1};
    case K::RMG: return {1, 2};
    case K::SA: return {2, 1};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Instantiation and recognition

namespace {

template <typename T>
const T& need(const std::optional<T>& v, const SchemaId& s, const char* what) {
  if (!v) throw SchemaError(display_name(s) + " binding is missing " + what);
  return *v;
}

Group agent_group(const SchemaId& s) {
  if (!s.agent) throw SchemaError(display_name(s) + " requires an agent");
  return Group::singleton(*s.agent);
}

}  // namespace

Formula instantiate_schema(const SchemaId& s, const SyntacticBinding& b) {
  auto G = [&] { return need(b.G, s, "G"); };
  auto H = [&] { return need(b.H, s, "H"); };
  auto J = [&] { return need(b.J, s, "J"); };
  auto phi = [&] { return need(b.phi, s, "phi"); };
  auto psi = [&] { return need(b.psi, s, "psi"); };
  switch (s.kind) {
    case K::B1:
      if (!G().is_disjoint_from(H()))
        throw SchemaError("B1 requires disjoint groups, got {" + G().to_string() + "} and {" +
                          H().to_string() + "}");
      [[fallthrough]];
    case K::CG:
      return F::implication(F::conjunction(F::box(G(), phi()), F::box(H(), psi())),
                            F::box(G() | H(), F::conjunction(phi(), psi())));
    case K::B2: return F::implication(F::box(G() | H(), F::top()), F::box(G(), F::top()));
    case K::B3:
      return F::implication(F::conjunction(F::box(G(), phi()), F::box(G() | H() | J(), phi())),
                            F::box(G() | H(), phi()));
    case K::B4:
      return F::implication(F::conjunction(F::box(G(), phi()), F::box(H(), F::disjunction(phi(), psi()))),
                            F::box(G() | H(), phi()));
    case K::Nec: return F::box(agent_group(s), F::top());
    case K::Conec: return F::negation(F::box(agent_group(s), F::top()));
    case K::P: return F::negation(F::box(agent_group(s), F::bottom()));
    case K::Cop: return F::box(agent_group(s), F::bottom());
    case K::PG: return F::negation(F::box(G(), F::bottom()));
    case K::TG: return F::implication(F::box(G(), phi()), phi());
    case K::DI: {
      Group i = agent_group(s);
      return F::implication(F::box(i, phi()), F::negation(F::box(i, F::negation(phi()))));
    }
    case K::RMG: return F::implication(F::box(G(), phi()), F::box(G(), F::disjunction(phi(), psi())));
    case K::SA: return F::implication(F::box(G(), phi()), F::box(G() | H(), phi()));
  }
  throw SchemaError("unknown schema");
}

namespace {

// A group X with base | X == target, preferring target \ base.
std::optional<Group> complement_within(const Group& base, const Group& target) {
  if (!base.is_subset_of(target)) return std::nullopt;
  auto rest = difference(target, base);
  if (rest.empty()) return base;
  return Group(std::move(rest));
}

bool is_box(const Formula& f) { return f.is(F::Kind::Box); }
bool is_conj_of_boxes(const Formula& f) { return f.is(F::Kind::And) && is_box(f.lhs()) && is_box(f.rhs()); }

std::optional<SyntacticBinding> raw_match(const Formula& f, const SchemaId& s) {
  SyntacticBinding b;
  const bool imp = f.is(F::Kind::Implies);
  switch (s.kind) {
    case K::B1:
    case K::CG: {
      if (!imp || !is_conj_of_boxes(f.lhs()) || !is_box(f.rhs()) || !f.rhs().body().is(F::Kind::And))
        return std::nullopt;
      b.G = f.lhs().lhs().group();
      b.H = f.lhs().rhs().group();
      b.phi = f.lhs().lhs().body();
      b.psi = f.lhs().rhs().body();
      if (s.kind == K::B1 && !b.G->is_disjoint_from(*b.H)) return std::nullopt;
      return b;
    }
    case K::B2: {
      if (!imp || !is_box(f.lhs()) || !is_box(f.rhs())) return std::nullopt;
      b.G = f.rhs().group();
      b.H = complement_within(*b.G, f.lhs().group());
      if (!b.H) return std::nullopt;
      return b;
    }
    case K::B3: {
      if (!imp || !is_conj_of_boxes(f.lhs()) || !is_box(f.rhs())) return std::nullopt;
      const Group& g = f.lhs().lhs().group();
      const Group& outer = f.lhs().rhs().group();
      const Group& mid = f.rhs().group();
      b.G = g;
      b.H = complement_within(g, mid);
      b.J = complement_within(mid, outer);
      if (!b.H || !b.J) return std::nullopt;
      b.phi = f.lhs().lhs().body();
      return b;
    }
    case K::B4: {
      if (!imp || !is_conj_of_boxes(f.lhs()) || !f.lhs().rhs().body().is(F::Kind::Or)) return std::nullopt;
      b.G = f.lhs().lhs().group();
      b.H = f.lhs().rhs().group();
      b.phi = f.lhs().lhs().body();
      b.psi = f.lhs().rhs().body().rhs();
      return b;
    }
    case K::Nec:
    case K::Conec:
    case K::P:
    case K::Cop: return b;
    case K::PG:
      if (!f.is(F::Kind::Not) || !is_box(f.body())) return std::nullopt;
      b.G = f.body().group();
      return b;
    case K::TG:
      if (!imp || !is_box(f.lhs())) return std::nullopt;
      b.G = f.lhs().group();
      b.phi = f.rhs();
      return b;
    case K::DI:
      if (!imp || !is_box(f.lhs())) return std::nullopt;
      b.phi = f.lhs().body();
      return b;
    case K::RMG:
      if (!imp || !is_box(f.lhs()) || !is_box(f.rhs()) || !f.rhs().body().is(F::Kind::Or))
        return std::nullopt;
      b.G = f.lhs().group();
      b.phi = f.lhs().body();
      b.psi = f.rhs().body().rhs();
      return b;
    case K::SA:
      if (!imp || !is_box(f.lhs()) || !is_box(f.rhs())) return std::nullopt;
      b.G = f.lhs().group();
      b.H = complement_within(*b.G, f.rhs().group());
      if (!b.H) return std::nullopt;
      b.phi = f.lhs().body();
      return b;
  }
  return std::nullopt;
}

}  // namespace

std::optional<SyntacticBinding> match_schema(const Formula& f, const SchemaId& s) {
  auto b = raw_match(f, s);
  if (!b) return std::nullopt;
  // The candidate binding is read off the shape; the instance must reproduce f exactly.
  try {
    if (instantiate_schema(s, *b) == f) return b;
  } catch (const SchemaError&) {
  }
  return std::nullopt;
}

std::vector<SchemaId> LogicDescriptor::schemas() const {
  std::vector<SchemaId> out;
  auto add = [&](SchemaId s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  if (!replace_b1_with_cg) add({K::B1, {}});
  add({K::B2, {}});
  add({K::B3, {}});
  add({K::B4, {}});
  if (replace_b1_with_cg) add({K::CG, {}});
  for (const auto& s : extensions)
    if (!(replace_b1_with_cg && s.kind == K::B1)) add(s);
  return out;
}

bool LogicDescriptor::includes(const SchemaId& s) const {
  auto all = schemas();
  return std::find(all.begin(), all.end(), s) != all.end();
}

std::optional<std::pair<SchemaId, SyntacticBinding>> is_axiom_instance(const Formula& f,
                                                                       const LogicDescriptor& l) {
  for (const auto& s : l.schemas())
    if (auto b = match_schema(f, s)) return std::make_pair(s, *b);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proof checking

namespace {

ProofVerdict reject(std::size_t line, std::string reason, std::size_t length) {
  return ProofVerdict{false, line, std::move(reason), length};
}

}  // namespace

ProofVerdict check_proof(const Proof& p, const LogicDescriptor& l) {
  const std::size_t n = p.lines.size();
  if (n == 0) return reject(0, "empty proof", 0);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto& [formula, just] = p.lines[k - 1];
    auto earlier = [&](std::size_t ref) { return ref >= 1 && ref < k; };
    if (std::holds_alternative<Justification::Taut>(just.rule)) {
      if (!is_propositional_tautology(formula))
        return reject(k, "not a propositional tautology", n);
    } else if (const auto* ax = std::get_if<Justification::Axiom>(&just.rule)) {
      if (ax->schema) {
        if (!l.includes(*ax->schema))
          return reject(k, "schema " + display_name(*ax->schema) + " is not part of the logic", n);
        auto b = match_schema(formula, *ax->schema);
        if (!b) return reject(k, "not an instance of " + display_name(*ax->schema), n);
        if (ax->binding && instantiate_schema(*ax->schema, *ax->binding) != formula)
          return reject(k, "stated binding does not produce this formula", n);
      } else if (!is_axiom_instance(formula, l)) {
        return reject(k, "not an axiom of the logic", n);
      }
    } else if (const auto* mp = std::get_if<Justification::ModusPonens>(&just.rule)) {
      if (!earlier(mp->minor) || !earlier(mp->major))
        return reject(k, "modus ponens must cite earlier lines", n);
      const Formula& major = p.lines[mp->major - 1].formula;
      if (!major.is(F::Kind::Implies) || major.lhs() != p.lines[mp->minor - 1].formula ||
          major.rhs() != formula)
        return reject(k, "line " + std::to_string(mp->major) + " is not (line " +
                             std::to_string(mp->minor) + " -> this line)", n);
    } else if (const auto* re = std::get_if<Justification::Replacement>(&just.rule)) {
      if (!earlier(re->from)) return reject(k, "replacement must cite an earlier line", n);
      const Formula& eq = p.lines[re->from - 1].formula;
      if (!eq.is(F::Kind::Iff)) return reject(k, "line " + std::to_string(re->from) + " is not an equivalence", n);
      const Formula expected =
          F::equivalence(F::box(re->group, eq.lhs()), F::box(re->group, eq.rhs()));
      if (formula != expected) return reject(k, "expected " + render(expected), n);
    }
  }
  return ProofVerdict{true, 0, "", n};
}

ProofVerdict check_entailment_certificate(std::span<const Formula> gamma, const Formula& phi,
                                          const Proof& p, const LogicDescriptor& l) {
  for (const auto& premise : p.premises)
    if (std::find(gamma.begin(), gamma.end(), premise) == gamma.end())
      throw SchemaError("premise " + render(premise) + " is not in the premise set");
  ProofVerdict v = check_proof(p, l);
  if (!v.accepted) return v;
  const Formula expected = p.premises.empty() ? phi : F::implication(conjoin(p.premises), phi);
  if (p.lines.back().formula != expected)
    return reject(p.lines.size(), "last line must be " + render(expected), p.lines.size());
  return v;
}

// ---------------------------------------------------------------------------
// Semantic schema checking

namespace {

using Table = NeighbourhoodCache::Table;

struct GroupTuple {
  std::vector<Group> groups;      // bound metavariables G, H, J
  std::vector<const Table*> t;    // tables the predicate reads
};

std::vector<GroupTuple> group_tuples(const SchemaId& s, std::span<const Group> pool,
                                     NeighbourhoodCache& cache) {
  std::vector<GroupTuple> out;
  const int arity = metavariables(s.kind).groups;
  auto push = [&](std::vector<Group> gs) {
    GroupTuple tuple{std::move(gs), {}};
    const auto& g = tuple.groups;
    switch (s.kind) {
      case K::B1:
      case K::CG:
      case K::B4:
        tuple.t = {&cache.table(g[0]), &cache.table(g[1]), &cache.table(g[0] | g[1])};
        break;
      case K::B2:
      case K::SA: tuple.t = {&cache.table(g[0]), &cache.table(g[0] | g[1])}; break;
      case K::B3:
        tuple.t = {&cache.table(g[0]), &cache.table(g[0] | g[1] | g[2]), &cache.table(g[0] | g[1])};
        break;
      case K::PG:
      case K::TG:
      case K::RMG: tuple.t = {&cache.table(g[0])}; break;
      default: tuple.t = {&cache.table(agent_group(s))};
    }
    out.push_back(std::move(tuple));
  };
  if (arity == 0) {
    push({});
  } else if (arity == 1) {
    for (const auto& g : pool) push({g});
  } else if (arity == 2) {
    for (const auto& g : pool)
      for (const auto& h : pool)
        if (s.kind != K::B1 || g.is_disjoint_from(h)) push({g, h});
  } else {
    for (const auto& g : pool)
      for (const auto& h : pool)
        for (const auto& j : pool) push({g, h, j});
  }
  return out;
}

// Whether the instance holds at world w.
bool holds(K kind, const GroupTuple& gt, std::size_t w, WorldSet x, WorldSet y, std::size_t n) {
  const auto& t = gt.t;
  const WorldSet all = WorldSet::full(n);
  const WorldSet none = WorldSet::empty(n);
  switch (kind) {
    case K::B1:
    case K::CG: return !(t[0]->contains(w, x) && t[1]->contains(w, y)) || t[2]->contains(w, x & y);
    case K::B2: return !t[1]->contains(w, all) || t[0]->contains(w, all);
    case K::B3: return !(t[0]->contains(w, x) && t[1]->contains(w, x)) || t[2]->contains(w, x);
    case K::B4: return !(t[0]->contains(w, x) && t[1]->contains(w, x | y)) || t[2]->contains(w, x);
    case K::Nec: return t[0]->contains(w, all);
    case K::Conec: return !t[0]->contains(w, all);
    case K::P:
    case K::PG: return !t[0]->contains(w, none);
    case K::Cop: return t[0]->contains(w, none);
    case K::TG: return !t[0]->contains(w, x) || x.contains(w);
    case K::DI: return !t[0]->contains(w, x) || !t[0]->contains(w, x.complement());
    case K::RMG: return !t[0]->contains(w, x) || t[0]->contains(w, x | y);
    case K::SA: return !t[0]->contains(w, x) || t[1]->contains(w, x);
  }
  return true;
}

std::optional<SchemaCounterexample> search(const Model& m, const SchemaId& s,
                                           std::span<const WorldSet> range,
                                           std::span<const Group> pool, NeighbourhoodCache& cache) {
  const std::size_t n = m.size();
  const auto mv = metavariables(s.kind);
  const auto tuples = group_tuples(s, pool, cache);
  const WorldSet none = WorldSet::empty(n);

  auto report = [&](const GroupTuple& gt, std::size_t w, std::optional<WorldSet> x,
                    std::optional<WorldSet> y) {
    SchemaCounterexample ce{{}, w};
    if (gt.groups.size() > 0) ce.binding.G = gt.groups[0];
    if (gt.groups.size() > 1) ce.binding.H = gt.groups[1];
    if (gt.groups.size() > 2) ce.binding.J = gt.groups[2];
    ce.binding.phi = x;
    ce.binding.psi = y;
    return ce;
  };

  for (std::size_t w = 0; w < n; ++w) {
    for (const auto& gt : tuples) {
      if (mv.sets == 0) {
        if (!holds(s.kind, gt, w, none, none, n)) return report(gt, w, std::nullopt, std::nullopt);
      } else if (mv.sets == 1) {
        for (auto x : range)
          if (!holds(s.kind, gt, w, x, none, n)) return report(gt, w, x, std::nullopt);
      } else {
        for (auto x : range)
          for (auto y : range)
            if (!holds(s.kind, gt, w, x, y, n)) return report(gt, w, x, y);
      }
    }
  }
  return std::nullopt;
}

std::vector<WorldSet> all_subsets(std::size_t n) {
  const std::uint64_t limit = effective_limit(std::uint64_t{1} << kMaxAllSubsetsWorlds);
  if (n > kMaxAllSubsetsWorlds || (std::uint64_t{1} << n) > limit)
    throw ResourceError("all-subsets mode needs 2^|W| <= " + std::to_string(limit) +
                        " subsets; model has " + std::to_string(n) + " worlds");
  std::vector<WorldSet> out;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) out.emplace_back(n, b);
  return out;
}

}  // namespace

SchemaVerdict check_schema_semantically(const Model& m, const SchemaId& s, SchemaMode mode,
                                        std::span<const Group> pool, NeighbourhoodCache& cache) {
  if (pool.empty() && metavariables(s.kind).groups > 0)
    throw SchemaError("group pool must be nonempty");
  if (metavariables(s.kind).groups == 0 && !s.agent) throw SchemaError(display_name(s) + " requires an agent");
  SchemaVerdict v;
  if (mode == SchemaMode::AllSubsets) {
    v.counterexample = search(m, s, all_subsets(m.size()), pool, cache);
  } else {
    const auto defs = definable_sets(m, pool).sets();
    v.counterexample = search(m, s, defs, pool, cache);
    if (!v.counterexample && m.size() <= kMaxAllSubsetsWorlds) {
      try {
        v.all_subsets_counterexample = search(m, s, all_subsets(m.size()), pool, cache);
      } catch (const ResourceError&) {
        // comparison skipped under a lowered state limit
      }
    }
  }
  v.valid = !v.counterexample.has_value();
  return v;
}

SchemaVerdict check_schema_semantically(const Model& m, const SchemaId& s, SchemaMode mode,
                                        std::span<const Group> pool) {
  NeighbourhoodCache cache(m);
  return check_schema_semantically(m, s, mode, pool, cache);
}

std::string format_binding(const Domain& d, const SemanticBinding& b) {
  std::vector<std::string> parts;
  if (b.G) parts.push_back("G={" + b.G->to_string() + "}");
  if (b.H) parts.push_back("H={" + b.H->to_string() + "}");
  if (b.J) parts.push_back("J={" + b.J->to_string() + "}");
  if (b.phi) parts.push_back("phi=" + d.format(*b.phi));
  if (b.psi) parts.push_back("psi=" + d.format(*b.psi));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out;
}

}  // namespace nbhd
