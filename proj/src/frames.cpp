#include "nbhd/frames.hpp"

#include <functional>

#include "nbhd/error.hpp"

namespace nbhd {

namespace {

using Kind = FrameCondition::Kind;

AgentId parse_agent_arg(std::string_view text, std::string_view arg) {
  if (arg.empty() || arg.size() > 9 || arg.find_first_not_of("0123456789") != std::string_view::npos)
    throw ParseError("agent id '" + std::string(arg) + "' is not a non-negative integer",
                     text.size() - arg.size());
  return AgentId{static_cast<std::uint32_t>(std::stoul(std::string(arg)))};
}

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

FrameCondition parse_condition(std::string_view text) {
  const std::string t = lower(text);
  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : t.substr(colon + 1);
  if (colon == std::string::npos) {
    if (head == "reflexive") return FrameCondition::reflexive();
    if (head == "bincons") return FrameCondition::binary_consistent();
    if (head == "monotone") return FrameCondition::monotone();
    if (head == "intclosed") return FrameCondition::intersection_closed();
  } else {
    if (head == "nec") return FrameCondition::nec(parse_agent_arg(t, arg));
    if (head == "conec") return FrameCondition::conec(parse_agent_arg(t, arg));
    if (head == "p") return FrameCondition::p(parse_agent_arg(t, arg));
    if (head == "cop") return FrameCondition::cop(parse_agent_arg(t, arg));
    if (head == "pg") return FrameCondition::pgroup(parse_group(arg));
  }
  throw ParseError("unknown frame condition '" + std::string(text) + "'", 0);
}

std::string to_string(const FrameCondition& c) {
  auto agent = [&] { return std::to_string(c.agent->value); };
  switch (c.kind) {
    case Kind::Nec: return "nec:" + agent();
    case Kind::Conec: return "conec:" + agent();
    case Kind::P: return "p:" + agent();
    case Kind::Cop: return "cop:" + agent();
    case Kind::PGroup: return "pg:" + c.group->to_string();
    case Kind::Reflexive: return "reflexive";
    case Kind::BinaryConsistent: return "bincons";
    case Kind::Monotone: return "monotone";
    case Kind::IntersectionClosed: return "intclosed";
  }
  return "";
}

namespace {

std::optional<WorldSet> least_missing_superset(const Family& f, std::size_t n) {
  if (n > 20) throw ResourceError("superset check limited to 20 worlds");
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    WorldSet y(n, b);
    if (f.contains(y)) continue;
    for (auto x : f)
      if (x.is_subset_of(y)) return y;
  }
  return std::nullopt;
}

// Offending set for one family at one world, if any.
std::optional<WorldSet> violation(Kind kind, const Family& f, std::size_t world, std::size_t n) {
  const WorldSet all = WorldSet::full(n);
  const WorldSet none = WorldSet::empty(n);
  switch (kind) {
    case Kind::Nec:
      if (!f.contains(all)) return all;
      return std::nullopt;
    case Kind::Conec:
      if (f.contains(all)) return all;
      return std::nullopt;
    case Kind::P:
    case Kind::PGroup:
      if (f.contains(none)) return none;
      return std::nullopt;
    case Kind::Cop:
      if (!f.contains(none)) return none;
      return std::nullopt;
    case Kind::Reflexive:
      for (auto x : f)
        if (!x.contains(world)) return x;
      return std::nullopt;
    case Kind::BinaryConsistent:
      for (auto x : f)
        if (f.contains(x.complement())) return x;
      return std::nullopt;
    case Kind::Monotone: return least_missing_superset(f, n);
    case Kind::IntersectionClosed: {
      std::optional<WorldSet> least;
      for (auto x : f)
        for (auto y : f) {
          WorldSet z = x & y;
          if (!f.contains(z) && (!least || z < *least)) least = z;
        }
      return least;
    }
  }
  return std::nullopt;
}

struct Owner {
  std::string name;
  std::function<const Family&(std::size_t)> family;
};

}  // namespace

FrameVerdict check_condition(const Model& m, const FrameCondition& c) {
  FrameVerdict verdict;
  const std::size_t n = m.size();
  std::vector<Owner> owners;
  std::vector<Family> derived;  // storage for PGroup families

  const auto* am = m.as_agent_model();
  const auto* gm = m.as_general_model();

  switch (c.kind) {
    case Kind::Nec:
    case Kind::Conec:
    case Kind::P:
    case Kind::Cop: {
      const AgentId i = c.agent.value();
      const std::string name = std::to_string(i.value);
      if (am) {
        if (!am->agents.contains(i))
          verdict.notes.push_back("agent " + name + " is absent from the model; its neighbourhoods are empty");
        owners.push_back({name, [am, i](std::size_t w) -> const Family& { return am->family(i, w); }});
      } else {
        const Group g = Group::singleton(i);
        if (!gm->groups.contains(g))
          verdict.notes.push_back("group {" + name + "} has no primitive entry; the default {{}} is used");
        derived.reserve(n);
        for (std::size_t w = 0; w < n; ++w) derived.push_back(group_neighbourhood(m, g, w));
        owners.push_back({name, [&derived](std::size_t w) -> const Family& { return derived[w]; }});
      }
      break;
    }
    case Kind::PGroup: {
      const Group& g = c.group.value();
      if (am)
        for (auto id : g.members())
          if (!am->agents.contains(id))
            verdict.notes.push_back("agent " + std::to_string(id.value) + " is absent from the model");
      derived.reserve(n);
      for (std::size_t w = 0; w < n; ++w) derived.push_back(group_neighbourhood(m, g, w));
      owners.push_back({g.to_string(), [&derived](std::size_t w) -> const Family& { return derived[w]; }});
      break;
    }
    default:
      if (am) {
        for (const auto& [id, map] : am->agents)
          owners.push_back({std::to_string(id.value), [&map](std::size_t w) -> const Family& { return map[w]; }});
      } else {
        for (const auto& [g, map] : gm->groups)
          owners.push_back({g.to_string(), [&map](std::size_t w) -> const Family& { return map[w]; }});
      }
  }

  for (std::size_t w = 0; w < n; ++w) {
    for (const auto& owner : owners) {
      if (auto bad = violation(c.kind, owner.family(w), w, n)) {
        verdict.holds = false;
        verdict.witness = FrameWitness{w, owner.name, *bad};
        return verdict;
      }
    }
  }
  return verdict;
}

namespace {

Family superset_closure(const Family& f, std::size_t n) {
  if (n > 20) throw ResourceError("superset closure limited to 20 worlds");
  std::vector<WorldSet> out;
  for (auto x : f) {
    const std::uint64_t free = ~x.bits() & WorldSet::full_mask(n);
    // every submask of the free bits, including zero
    std::uint64_t sub = free;
    while (true) {
      out.emplace_back(n, x.bits() | sub);
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }
  return Family(std::move(out));
}

Family intersection_closure(const Family& f) {
  Family out = f;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<WorldSet> members(out.begin(), out.end());
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        changed |= out.insert(members[a] & members[b]);
  }
  return out;
}

template <typename Fn>
AgentModel map_families(const AgentModel& m, Fn fn) {
  AgentModel out = m;
  for (auto& [id, map] : out.agents)
    for (auto& family : map) family = fn(family);
  return out;
}

}  // namespace

AgentModel close_under_supersets(const AgentModel& m) {
  const std::size_t n = m.domain.size();
  return map_families(m, [n](const Family& f) { return superset_closure(f, n); });
}

AgentModel close_under_intersections(const AgentModel& m) {
  return map_families(m, [](const Family& f) { return intersection_closure(f); });
}

Model close_under_supersets(const Model& m) {
  if (!m.is_agent_model()) throw ModelError("closures are defined on agent models only");
  return close_under_supersets(*m.as_agent_model());
}

Model close_under_intersections(const Model& m) {
  if (!m.is_agent_model()) throw ModelError("closures are defined on agent models only");
  return close_under_intersections(*m.as_agent_model());
}

}  // namespace nbhd
