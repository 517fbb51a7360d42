#include "nbhd/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "nbhd/error.hpp"
#include "nbhd/limits.hpp"

namespace nbhd {

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ModelError("domain must be nonempty");
  if (labels_.size() > kMaxWorlds)
    throw ModelError("domain has " + std::to_string(labels_.size()) + " worlds; at most " +
                     std::to_string(kMaxWorlds) + " are supported");
  std::set<std::string_view> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw ModelError("duplicate world label '" + l + "'");
}

Domain Domain::unlabelled(std::size_t size) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) labels.push_back("w" + std::to_string(i));
  return Domain(std::move(labels));
}

const std::string& Domain::label(std::size_t world) const {
  if (world >= labels_.size()) throw ModelError("unknown world index " + std::to_string(world));
  return labels_[world];
}

std::optional<std::size_t> Domain::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

std::size_t Domain::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw ModelError("unknown world '" + std::string(label) + "'");
}

std::string Domain::format(WorldSet set) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!set.contains(i)) continue;
    if (!first) out += ',';
    out += labels_[i];
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Models

std::vector<AgentId> AgentModel::agent_ids() const {
  std::vector<AgentId> out;
  for (const auto& [id, _] : agents) out.push_back(id);
  return out;
}

const Family& AgentModel::family(AgentId agent, std::size_t world) const {
  static const Family kEmpty;
  if (world >= domain.size()) throw ModelError("unknown world index " + std::to_string(world));
  auto it = agents.find(agent);
  if (it == agents.end()) return kEmpty;
  return it->second.at(world);
}

Model::Model(AgentModel m) : data_(std::move(m)) {}
Model::Model(GeneralModel m) : data_(std::move(m)) {}

const Domain& Model::domain() const {
  return std::visit([](const auto& m) -> const Domain& { return m.domain; }, data_);
}

const Valuation& Model::valuation() const {
  return std::visit([](const auto& m) -> const Valuation& { return m.valuation; }, data_);
}

std::vector<AgentId> Model::mentioned_agents() const {
  if (auto a = as_agent_model()) return a->agent_ids();
  std::set<AgentId> out;
  for (const auto& [g, _] : as_general_model()->groups)
    for (auto id : g.members()) out.insert(id);
  return {out.begin(), out.end()};
}

std::vector<Group> Model::mentioned_groups() const {
  std::vector<Group> out;
  if (auto a = as_agent_model()) {
    for (auto id : a->agent_ids()) out.push_back(Group::singleton(id));
  } else {
    for (const auto& [g, _] : as_general_model()->groups) out.push_back(g);
  }
  std::sort(out.begin(), out.end(), pool_order);
  return out;
}

namespace {

void validate_map(const NeighbourhoodMap& map, std::size_t n, const std::string& owner) {
  if (map.size() != n)
    throw ModelError("neighbourhood map for " + owner + " has " + std::to_string(map.size()) +
                     " entries, expected " + std::to_string(n));
  for (const auto& family : map)
    for (auto x : family)
      if (x.domain_size() != n) throw ModelError("neighbourhood set of " + owner + " over wrong domain");
}

}  // namespace

void validate(const Model& m) {
  const std::size_t n = m.size();
  for (const auto& [name, set] : m.valuation())
    if (set.domain_size() != n) throw ModelError("valuation of '" + name + "' over wrong domain");
  if (auto a = m.as_agent_model()) {
    for (const auto& [id, map] : a->agents) validate_map(map, n, "agent " + std::to_string(id.value));
  } else {
    for (const auto& [g, map] : m.as_general_model()->groups) validate_map(map, n, "group " + g.to_string());
  }
}

Family group_neighbourhood(const Model& m, const Group& g, std::size_t world) {
  const std::size_t n = m.size();
  if (world >= n) throw ModelError("unknown world index " + std::to_string(world));
  if (auto gm = m.as_general_model()) {
    auto it = gm->groups.find(g);
    if (it == gm->groups.end()) return Family({WorldSet::empty(n)});
    return it->second[world];
  }
  const auto& am = *m.as_agent_model();
  if (g.size() > kMaxGroupSize)
    throw ResourceError("group " + g.to_string() + " exceeds " + std::to_string(kMaxGroupSize) + " agents");
  const std::uint64_t limit = effective_limit(kMaxCartesianProduct);
  std::uint64_t product = 1;
  for (auto id : g.members()) {
    std::uint64_t k = am.family(id, world).size();
    if (k == 0) return Family();
    product *= k;
    if (product > limit)
      throw ResourceError("cartesian product for group " + g.to_string() + " exceeds " +
                          std::to_string(limit) + " combinations");
  }
  // Folding member by member with deduplication yields the same set as the
  // full cartesian enumeration.
  std::vector<WorldSet> acc{WorldSet::full(n)};
  for (auto id : g.members()) {
    std::vector<WorldSet> next;
    for (auto x : acc)
      for (auto y : am.family(id, world)) next.push_back(x & y);
    Family merged(std::move(next));
    acc.assign(merged.begin(), merged.end());
  }
  return Family(std::move(acc));
}

const NeighbourhoodCache::Table& NeighbourhoodCache::table(const Group& g) {
  auto it = tables_.find(g);
  if (it != tables_.end()) return it->second;
  Table t;
  const std::size_t n = model_->size();
  for (std::size_t w = 0; w < n; ++w) t.families.push_back(group_neighbourhood(*model_, g, w));
  if (n <= 16) {
    const std::size_t words = ((std::size_t{1} << n) + 63) / 64;
    for (const auto& fam : t.families) {
      std::vector<std::uint64_t> bm(words, 0);
      for (auto x : fam) bm[x.bits() >> 6] |= std::uint64_t{1} << (x.bits() & 63);
      t.bitmaps.push_back(std::move(bm));
    }
  }
  return tables_.emplace(g, std::move(t)).first->second;
}

const Family& NeighbourhoodCache::family(const Group& g, std::size_t world) {
  return table(g).families.at(world);
}

bool NeighbourhoodCache::contains(const Group& g, std::size_t world, WorldSet x) {
  return table(g).contains(world, x);
}

// ---------------------------------------------------------------------------
// Truth

WorldSet truth_set(const Model& m, const Formula& f, NeighbourhoodCache& cache) {
  using K = Formula::Kind;
  const std::size_t n = m.size();
  switch (f.kind()) {
    case K::Bottom: return WorldSet::empty(n);
    case K::Top: return WorldSet::full(n);
    case K::Atom: {
      auto it = m.valuation().find(f.name());
      return it == m.valuation().end() ? WorldSet::empty(n) : it->second;
    }
    case K::Not: return truth_set(m, f.body(), cache).complement();
    case K::Or: return truth_set(m, f.lhs(), cache) | truth_set(m, f.rhs(), cache);
    case K::And: return truth_set(m, f.lhs(), cache) & truth_set(m, f.rhs(), cache);
    case K::Implies: return truth_set(m, f.lhs(), cache).complement() | truth_set(m, f.rhs(), cache);
    case K::Iff: {
      WorldSet a = truth_set(m, f.lhs(), cache);
      WorldSet b = truth_set(m, f.rhs(), cache);
      return (a & b) | (a.complement() & b.complement());
    }
    case K::Box: {
      WorldSet body = truth_set(m, f.body(), cache);
      const auto& table = cache.table(f.group());
      WorldSet out = WorldSet::empty(n);
      for (std::size_t w = 0; w < n; ++w)
        if (table.contains(w, body)) out = out.with(w);
      return out;
    }
  }
  return WorldSet::empty(n);
}

WorldSet truth_set(const Model& m, const Formula& f) {
  NeighbourhoodCache cache(m);
  return truth_set(m, f, cache);
}

bool satisfies(const Model& m, std::size_t world, const Formula& f) {
  if (world >= m.size()) throw ModelError("unknown world index " + std::to_string(world));
  return truth_set(m, f).contains(world);
}

bool valid_on_model(const Model& m, const Formula& f) { return truth_set(m, f).is_full(); }

// ---------------------------------------------------------------------------
// Definable sets

std::vector<WorldSet> DefinableSets::sets() const {
  std::vector<WorldSet> out;
  for (const auto& [x, _] : witnesses_) out.push_back(x);
  return out;
}

DefinableSets definable_sets(const Model& m, std::span<const Group> pool) {
  const std::size_t n = m.size();
  if (n > 12) throw ResourceError("definable-set closure limited to 12 worlds");
  DefinableSets result;
  auto& table = result.witnesses_;

  auto offer = [&](WorldSet x, const Formula& f) {
    std::string text = render(f);
    auto it = table.find(x);
    if (it == table.end()) {
      table.emplace(x, DefinableSets::Entry{f, std::move(text)});
      return true;
    }
    const auto& cur = it->second;
    if (f.size() < cur.formula.size() || (f.size() == cur.formula.size() && text < cur.text)) {
      it->second = DefinableSets::Entry{f, std::move(text)};
      return true;
    }
    return false;
  };

  offer(WorldSet::empty(n), Formula::bottom());
  offer(WorldSet::full(n), Formula::top());
  for (const auto& [name, set] : m.valuation()) offer(set, Formula::atom(name));

  NeighbourhoodCache cache(m);
  for (const auto& g : pool) cache.table(g);

  // Witness sizes only decrease, so this terminates.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<WorldSet, Formula>> snapshot;
    for (const auto& [x, e] : table) snapshot.emplace_back(x, e.formula);
    for (const auto& [x, f] : snapshot) {
      changed |= offer(x.complement(), Formula::negation(f));
      for (const auto& g : pool) {
        const auto& t = cache.table(g);
        WorldSet image = WorldSet::empty(n);
        for (std::size_t w = 0; w < n; ++w)
          if (t.contains(w, x)) image = image.with(w);
        changed |= offer(image, Formula::box(g, f));
      }
      for (const auto& [y, h] : snapshot) changed |= offer(x | y, Formula::disjunction(f, h));
    }
  }
  return result;
}

std::vector<Group> default_pool(const Model& m) {
  std::vector<Group> pool = m.mentioned_groups();
  auto agents = m.mentioned_agents();
  for (auto& g : subsets_up_to(agents, 3)) pool.push_back(std::move(g));
  std::sort(pool.begin(), pool.end(), pool_order);
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

// ---------------------------------------------------------------------------
// Fixtures

FixtureId parse_fixture_id(std::string_view name) {
  std::string upper;
  for (char c : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "M1") return FixtureId::M1;
  if (upper == "M2") return FixtureId::M2;
  if (upper == "M3") return FixtureId::M3;
  if (upper == "M4") return FixtureId::M4;
  if (upper == "NONREFLEXIVE") return FixtureId::NonReflexive;
  throw ModelError("unknown fixture '" + std::string(name) + "' (expected M1, M2, M3, M4 or NONREFLEXIVE)");
}

std::string_view fixture_name(FixtureId id) {
  switch (id) {
    case FixtureId::M1: return "M1";
    case FixtureId::M2: return "M2";
    case FixtureId::M3: return "M3";
    case FixtureId::M4: return "M4";
    case FixtureId::NonReflexive: return "NONREFLEXIVE";
  }
  return "";
}

namespace {

NeighbourhoodMap constant(std::size_t n, std::vector<WorldSet> sets) {
  return NeighbourhoodMap(n, Family(std::move(sets)));
}

}  // namespace

Model builtin_fixture(FixtureId id) {
  if (id == FixtureId::NonReflexive) {
    AgentModel m{Domain({"w", "v"}), {}, {}};
    const WorldSet all = m.domain.full_set();
    m.valuation = {{"p", all}, {"q", all}, {"r", all}};
    m.agents[AgentId{1}] = constant(2, {WorldSet::singleton(2, 0)});
    m.agents[AgentId{2}] = constant(2, {WorldSet::singleton(2, 1)});
    return m;
  }
  constexpr std::size_t n = 3;
  GeneralModel m{Domain({"wp", "wq", "wr"}), {}, {}};
  const WorldSet wp = WorldSet::singleton(n, 0);
  const WorldSet wq = WorldSet::singleton(n, 1);
  const WorldSet wr = WorldSet::singleton(n, 2);
  const WorldSet none = WorldSet::empty(n);
  m.valuation = {{"p", wp}, {"q", wq}, {"r", wr}};
  switch (id) {
    case FixtureId::M1:
      m.groups[Group{1}] = constant(n, {wp | wr, none});
      m.groups[Group{2}] = constant(n, {wq | wr, none});
      break;
    case FixtureId::M2: {
      std::vector<WorldSet> all, proper;
      for (std::uint64_t b = 0; b < 8; ++b) {
        all.emplace_back(n, b);
        if (b != 7) proper.emplace_back(n, b);
      }
      for (std::uint32_t i = 1; i <= 3; ++i) m.groups[Group{i}] = constant(n, proper);
      for (auto g : {Group{1, 2}, Group{1, 3}, Group{2, 3}, Group{1, 2, 3}}) m.groups[g] = constant(n, all);
      break;
    }
    case FixtureId::M3:
      m.groups[Group{1}] = constant(n, {wp, none});
      m.groups[Group{1, 2, 3}] = constant(n, {wp, none});
      break;
    case FixtureId::M4:
      m.groups[Group{1, 3}] = constant(n, {wp, none});
      m.groups[Group{1, 2}] = constant(n, {wp | wq, none});
      m.groups[Group{1, 2, 3}] = constant(n, {wp | wq, none});
      break;
    default: break;
  }
  return m;
}

}  // namespace nbhd
