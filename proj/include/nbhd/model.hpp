#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nbhd/formula.hpp"
#include "nbhd/world_set.hpp"

namespace nbhd {

/// Finite nonempty set of worlds with dense indices and unique labels.
class Domain {
 public:
  explicit Domain(std::vector<std::string> labels);
  /// Worlds labelled "w0", "w1", ...
  static Domain unlabelled(std::size_t size);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t world) const;
  std::span<const std::string> labels() const { return labels_; }
  /// Throws ModelError for an unknown label.
  std::size_t index_of(std::string_view label) const;
  std::optional<std::size_t> find(std::string_view label) const;

  WorldSet empty_set() const { return WorldSet::empty(size()); }
  WorldSet full_set() const { return WorldSet::full(size()); }

  /// "{wp,wr}"
  std::string format(WorldSet set) const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::vector<std::string> labels_;
};

/// One neighbourhood family per world.
using NeighbourhoodMap = std::vector<Family>;

using Valuation = std::map<std::string, WorldSet, std::less<>>;

/// Model with one neighbourhood function per agent; group neighbourhoods are
/// derived by pointwise intersection.
struct AgentModel {
  Domain domain;
  Valuation valuation;
  std::map<AgentId, NeighbourhoodMap> agents;

  std::vector<AgentId> agent_ids() const;
  /// Empty family for agents absent from the model.
  const Family& family(AgentId agent, std::size_t world) const;

  friend bool operator==(const AgentModel&, const AgentModel&) = default;
};

/// Model with a primitive neighbourhood function per group. Groups without
/// an entry have the family {empty set} at every world.
struct GeneralModel {
  Domain domain;
  Valuation valuation;
  std::map<Group, NeighbourhoodMap> groups;

  friend bool operator==(const GeneralModel&, const GeneralModel&) = default;
};

class Model {
 public:
  Model(AgentModel m);
  Model(GeneralModel m);

  const Domain& domain() const;
  const Valuation& valuation() const;
  std::size_t size() const { return domain().size(); }

  bool is_agent_model() const { return std::holds_alternative<AgentModel>(data_); }
  const AgentModel* as_agent_model() const { return std::get_if<AgentModel>(&data_); }
  const GeneralModel* as_general_model() const { return std::get_if<GeneralModel>(&data_); }

  /// Agents with a neighbourhood map, or mentioned in some group entry.
  std::vector<AgentId> mentioned_agents() const;
  /// Groups with a primitive entry (GeneralModel) or singletons of agents (AgentModel).
  std::vector<Group> mentioned_groups() const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  std::variant<AgentModel, GeneralModel> data_;
};

/// Checks domain consistency of every valuation and neighbourhood set.
/// Throws ModelError.
void validate(const Model& m);

/// N_g(w). For agent models: every intersection picking one set per member,
/// deduplicated. Throws ModelError for an unknown world, ResourceError when
/// |g| or the cartesian product exceeds the guards.
Family group_neighbourhood(const Model& m, const Group& g, std::size_t world);

/// Group neighbourhood memoized per (group, world); membership tests are
/// constant time for domains of up to 16 worlds.
class NeighbourhoodCache {
 public:
  explicit NeighbourhoodCache(const Model& m) : model_(&m) {}

  const Family& family(const Group& g, std::size_t world);
  bool contains(const Group& g, std::size_t world, WorldSet x);

  struct Table {
    std::vector<Family> families;
    std::vector<std::vector<std::uint64_t>> bitmaps;  // per world, over P(W); empty when too large
    bool contains(std::size_t world, WorldSet x) const {
      if (bitmaps.empty()) return families[world].contains(x);
      return bitmaps[world][x.bits() >> 6] >> (x.bits() & 63) & 1u;
    }
  };
  const Table& table(const Group& g);

 private:
  const Model* model_;
  std::map<Group, Table> tables_;
};

/// Worlds at which `f` holds.
WorldSet truth_set(const Model& m, const Formula& f);
WorldSet truth_set(const Model& m, const Formula& f, NeighbourhoodCache& cache);

/// Throws ModelError for an unknown world.
bool satisfies(const Model& m, std::size_t world, const Formula& f);

bool valid_on_model(const Model& m, const Formula& f);

/// Sets definable in `m` using the modalities in `pool`, each with a shortest
/// witness formula (ties broken by rendered text).
class DefinableSets {
 public:
  std::vector<WorldSet> sets() const;
  bool contains(WorldSet x) const { return witnesses_.contains(x); }
  const Formula& witness(WorldSet x) const { return witnesses_.at(x).formula; }
  std::size_t size() const { return witnesses_.size(); }

 private:
  friend DefinableSets definable_sets(const Model& m, std::span<const Group> pool);
  struct Entry {
    Formula formula;
    std::string text;
  };
  std::map<WorldSet, Entry> witnesses_;
};

/// Least family containing empty set, W and the valuation sets, closed under
/// complement, union and the box image of each pool group.
DefinableSets definable_sets(const Model& m, std::span<const Group> pool);

/// Default group pool for a model: mentioned groups plus every group of
/// at most three mentioned agents, in pool order.
std::vector<Group> default_pool(const Model& m);

enum class FixtureId { M1, M2, M3, M4, NonReflexive };

/// Throws ModelError for an unknown name.
FixtureId parse_fixture_id(std::string_view name);
std::string_view fixture_name(FixtureId id);

/// The independence models over W={wp,wq,wr} and the two-world
/// non-reflexive agent model.
Model builtin_fixture(FixtureId id);

}  // namespace nbhd
