#include "nbhd/search.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "nbhd/error.hpp"
#include "nbhd/limits.hpp"

namespace nbhd {

using CK = FrameCondition::Kind;

std::vector<Group> search_pool(const SearchBounds& b) { return subsets_up_to(b.agents, 3); }

std::vector<FrameCondition> constraints_for(const LogicDescriptor& l, std::span<const AgentId> agents,
                                            std::span<const Group> pool) {
  std::vector<FrameCondition> out;
  auto add = [&](FrameCondition c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  };
  for (const auto& s : l.schemas()) {
    switch (s.kind) {
      case SchemaId::Kind::Nec: add(FrameCondition::nec(*s.agent)); break;
      case SchemaId::Kind::Conec: add(FrameCondition::conec(*s.agent)); break;
      case SchemaId::Kind::P: add(FrameCondition::p(*s.agent)); break;
      case SchemaId::Kind::Cop: add(FrameCondition::cop(*s.agent)); break;
      case SchemaId::Kind::PG:
        for (const auto& g : pool) add(FrameCondition::pgroup(g));
        break;
      case SchemaId::Kind::TG: add(FrameCondition::reflexive()); break;
      case SchemaId::Kind::DI: add(FrameCondition::binary_consistent()); break;
      case SchemaId::Kind::RMG: add(FrameCondition::monotone()); break;
      case SchemaId::Kind::CG: add(FrameCondition::intersection_closed()); break;
      case SchemaId::Kind::SA:
        for (auto i : agents) add(FrameCondition::nec(i));
        break;
      default: break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random generation

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform in [0, k) by rejection on raw 64-bit output.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t k) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % k;
  while (true) {
    std::uint64_t x = rng();
    if (x < limit) return x % k;
  }
}

// Each of the 2^n subsets of W included independently with probability 1/2.
Family random_family(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<WorldSet> sets;
  for (std::uint64_t base = 0; base < count; base += 64) {
    std::uint64_t word = rng();
    for (std::uint64_t k = 0; k < 64 && base + k < count; ++k)
      if (word >> k & 1u) sets.emplace_back(n, base + k);
  }
  return Family(std::move(sets));
}

void check_static_conflicts(std::span<const FrameCondition> cs) {
  auto has = [&](CK kind, AgentId i) {
    return std::any_of(cs.begin(), cs.end(), [&](const auto& c) { return c.kind == kind && c.agent == i; });
  };
  for (const auto& c : cs) {
    if (c.kind == CK::Nec && has(CK::Conec, *c.agent))
      throw ConstraintError("nec:" + std::to_string(c.agent->value) + " and conec:" +
                            std::to_string(c.agent->value) + " are contradictory");
    if (c.kind == CK::Cop && has(CK::P, *c.agent))
      throw ConstraintError("cop:" + std::to_string(c.agent->value) + " and p:" +
                            std::to_string(c.agent->value) + " are contradictory");
  }
}

template <typename Fn>
void for_agent_families(AgentModel& m, std::optional<AgentId> only, Fn fn) {
  for (auto& [id, map] : m.agents) {
    if (only && *only != id) continue;
    for (std::size_t w = 0; w < map.size(); ++w) fn(id, w, map[w]);
  }
}

}  // namespace

AgentModel repair(AgentModel m, std::span<const FrameCondition> constraints) {
  check_static_conflicts(constraints);
  const std::size_t n = m.domain.size();
  const WorldSet all = WorldSet::full(n);
  const WorldSet none = WorldSet::empty(n);
  auto has = [&](CK kind) {
    return std::any_of(constraints.begin(), constraints.end(), [&](const auto& c) { return c.kind == kind; });
  };

  // 1. insertions
  for (const auto& c : constraints) {
    if (c.kind == CK::Nec) for_agent_families(m, c.agent, [&](AgentId, std::size_t, Family& f) { f.insert(all); });
    if (c.kind == CK::Cop) for_agent_families(m, c.agent, [&](AgentId, std::size_t, Family& f) { f.insert(none); });
  }

  // 2. deletions
  for (const auto& c : constraints) {
    if (c.kind == CK::P) for_agent_families(m, c.agent, [&](AgentId, std::size_t, Family& f) { f.erase(none); });
    if (c.kind == CK::Conec) for_agent_families(m, c.agent, [&](AgentId, std::size_t, Family& f) { f.erase(all); });
  }
  if (has(CK::Reflexive)) {
    for_agent_families(m, std::nullopt, [&](AgentId, std::size_t w, Family& f) {
      std::vector<WorldSet> keep;
      for (auto x : f)
        if (x.contains(w)) keep.push_back(x);
      f = Family(std::move(keep));
    });
  }
  std::set<AgentId> anchored;
  for (const auto& c : constraints)
    if (c.kind == CK::PGroup)
      for (auto id : c.group->members()) anchored.insert(id);
  if (!anchored.empty()) {
    // Every set kept contains the anchor world, so every intersection does.
    for (std::size_t w = 0; w < n; ++w) {
      std::vector<std::size_t> votes(n, 0);
      for (auto id : anchored)
        if (auto it = m.agents.find(id); it != m.agents.end())
          for (auto x : it->second[w])
            for (std::size_t v = 0; v < n; ++v) votes[v] += x.contains(v);
      const std::size_t anchor = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
      for (auto id : anchored) {
        auto it = m.agents.find(id);
        if (it == m.agents.end()) continue;
        std::vector<WorldSet> keep;
        for (auto x : it->second[w])
          if (x.contains(anchor)) keep.push_back(x);
        it->second[w] = Family(std::move(keep));
      }
    }
  }

  // 3. closures
  if (has(CK::Monotone)) m = close_under_supersets(m);
  if (has(CK::IntersectionClosed)) m = close_under_intersections(m);

  // 4. binary consistency: drop the later member of each complementary pair
  if (has(CK::BinaryConsistent)) {
    for_agent_families(m, std::nullopt, [&](AgentId, std::size_t, Family& f) {
      std::vector<WorldSet> members(f.begin(), f.end());
      for (auto x : members)
        if (f.contains(x) && x < x.complement()) f.erase(x.complement());
    });
  }

  const Model model(m);
  for (const auto& c : constraints) {
    auto v = check_condition(model, c);
    if (!v.holds)
      throw ConstraintError("constraint " + to_string(c) + " cannot be satisfied together with the others "
                            "(violated at world " + m.domain.label(v.witness->world) + ")");
  }
  return m;
}

AgentModel random_model(const SearchBounds& b, std::uint64_t draw) {
  const auto* random = std::get_if<SearchBounds::Random>(&b.mode);
  if (!random) throw ConstraintError("random_model requires random mode");
  if (b.max_worlds < 1 || b.max_worlds > kMaxRandomWorlds)
    throw ResourceError("random mode supports 1.." + std::to_string(kMaxRandomWorlds) + " worlds");
  std::mt19937_64 rng(splitmix64(random->seed ^ splitmix64(draw)));
  const std::size_t n = 1 + static_cast<std::size_t>(below(rng, b.max_worlds));
  AgentModel m{Domain::unlabelled(n), {}, {}};
  std::vector<AgentId> agents = b.agents;
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  for (auto id : agents) {
    NeighbourhoodMap map;
    for (std::size_t w = 0; w < n; ++w) map.push_back(random_family(rng, n));
    m.agents[id] = std::move(map);
  }
  for (const auto& atom : b.atoms) m.valuation[atom] = WorldSet(n, rng());
  return repair(std::move(m), b.constraints);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

namespace {

void check_exhaustive_guard(const SearchBounds& b) {
  if (b.max_worlds < 1 || b.max_worlds > kMaxExhaustiveWorlds || b.agents.size() > kMaxExhaustiveAgents ||
      b.atoms.size() > kMaxExhaustiveAtoms)
    throw ResourceError("exhaustive mode is limited to " + std::to_string(kMaxExhaustiveWorlds) + " worlds, " +
                        std::to_string(kMaxExhaustiveAgents) + " agents and " +
                        std::to_string(kMaxExhaustiveAtoms) + " atoms");
}

}  // namespace

std::uint64_t exhaustive_space_size(const SearchBounds& b, bool enumerate_valuations) {
  check_exhaustive_guard(b);
  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= b.max_worlds; ++n) {
    const std::uint64_t family_bits = (std::uint64_t{1} << n) * n * b.agents.size();
    const std::uint64_t val_bits = enumerate_valuations ? n * b.atoms.size() : 0;
    total += std::uint64_t{1} << (family_bits + val_bits);
  }
  const std::uint64_t limit = effective_limit(kMaxExhaustiveStates);
  if (total > limit)
    throw ResourceError("exhaustive space of " + std::to_string(total) + " models exceeds " + std::to_string(limit));
  return total;
}

namespace {

// Visits models in enumeration order until `visit` returns true.
template <typename Visit>
std::optional<std::uint64_t> enumerate_models(const SearchBounds& b, bool enumerate_valuations, Visit visit) {
  exhaustive_space_size(b, enumerate_valuations);
  std::vector<AgentId> agents = b.agents;
  std::sort(agents.begin(), agents.end());
  std::uint64_t index = 0;
  for (std::size_t n = 1; n <= b.max_worlds; ++n) {
    const std::uint64_t sets = std::uint64_t{1} << n;  // subsets of W
    const std::size_t slots = agents.size() * n;       // one family per (agent, world)
    const std::uint64_t nb_count = std::uint64_t{1} << (sets * slots);
    const std::uint64_t val_count = enumerate_valuations ? std::uint64_t{1} << (n * b.atoms.size()) : 1;
    for (std::uint64_t nb = 0; nb < nb_count; ++nb) {
      AgentModel m{Domain::unlabelled(n), {}, {}};
      for (std::size_t a = 0; a < agents.size(); ++a) {
        NeighbourhoodMap map;
        for (std::size_t w = 0; w < n; ++w) {
          const std::uint64_t digit = nb >> ((a * n + w) * sets) & ((std::uint64_t{1} << sets) - 1);
          std::vector<WorldSet> fam;
          for (std::uint64_t k = 0; k < sets; ++k)
            if (digit >> k & 1u) fam.emplace_back(n, k);
          map.push_back(Family(std::move(fam)));
        }
        m.agents[agents[a]] = std::move(map);
      }
      bool admissible = true;
      {
        const Model model(m);
        for (const auto& c : b.constraints)
          if (!check_condition(model, c).holds) {
            admissible = false;
            break;
          }
      }
      for (std::uint64_t v = 0; v < val_count; ++v, ++index) {
        if (!admissible) continue;
        for (std::size_t t = 0; t < b.atoms.size(); ++t)
          m.valuation[b.atoms[t]] = enumerate_valuations ? WorldSet(n, v >> (t * n)) : WorldSet::empty(n);
        if (visit(m, index)) return index;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Countermodel> find_countermodel(const SearchTarget& target, const SearchBounds& b) {
  check_static_conflicts(b.constraints);
  const auto* formula = std::get_if<Formula>(&target);
  const auto* schema = std::get_if<SchemaTarget>(&target);
  std::vector<Group> pool;
  if (schema) pool = schema->pool.empty() ? search_pool(b) : schema->pool;

  std::optional<Countermodel> found;
  auto test = [&](const AgentModel& am, std::uint64_t index) {
    const Model m(am);
    if (formula) {
      WorldSet truth = truth_set(m, *formula);
      if (truth.is_full()) return false;
      std::size_t w = static_cast<std::size_t>(std::countr_zero(truth.complement().bits()));
      found = Countermodel{am, index, w, std::nullopt};
      return true;
    }
    auto v = check_schema_semantically(m, schema->schema, schema->mode, pool);
    if (v.valid) return false;
    found = Countermodel{am, index, std::nullopt, v.counterexample};
    return true;
  };

  if (const auto* random = std::get_if<SearchBounds::Random>(&b.mode)) {
    for (std::uint64_t draw = 0; draw < random->trials; ++draw)
      if (test(random_model(b, draw), draw)) break;
  } else {
    // Schema checks in all-subsets mode ignore the valuation.
    const bool valuations = formula || schema->mode == SchemaMode::DefinableOnly;
    enumerate_models(b, valuations, test);
  }
  return found;
}

// ---------------------------------------------------------------------------
// Soundness fuzzing

FuzzReport soundness_fuzz(const LogicDescriptor& l, const SearchBounds& b) {
  const auto* random = std::get_if<SearchBounds::Random>(&b.mode);
  if (!random) throw ConstraintError("soundness fuzzing requires random mode with a seed");
  const auto pool = search_pool(b);
  for (const auto& needed : constraints_for(l, b.agents, pool))
    if (std::find(b.constraints.begin(), b.constraints.end(), needed) == b.constraints.end())
      throw ConstraintError("the logic requires frame condition " + to_string(needed));

  const auto schemas = l.schemas();
  FuzzReport report;
  report.trials = random->trials;
  for (std::uint64_t draw = 0; draw < random->trials; ++draw) {
    AgentModel am = random_model(b, draw);
    const Model m(am);
    NeighbourhoodCache cache(m);
    for (const auto& s : schemas) {
      auto v = check_schema_semantically(m, s, SchemaMode::AllSubsets, pool, cache);
      if (!v.valid) report.violations.push_back(Violation{draw, am, s, *v.counterexample});
    }
  }
  return report;
}

}  // namespace nbhd
