#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "nbhd/frames.hpp"
#include "nbhd/logics.hpp"

namespace nbhd {

struct SearchBounds {
  struct Exhaustive {};
  struct Random {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
  };

  std::size_t max_worlds = 1;
  std::vector<AgentId> agents;
  std::vector<std::string> atoms;
  std::variant<Exhaustive, Random> mode = Exhaustive{};
  std::vector<FrameCondition> constraints;

  bool is_random() const { return std::holds_alternative<Random>(mode); }
};

inline constexpr std::size_t kMaxRandomWorlds = 8;
inline constexpr std::size_t kMaxExhaustiveWorlds = 2;
inline constexpr std::size_t kMaxExhaustiveAgents = 2;
inline constexpr std::size_t kMaxExhaustiveAtoms = 2;
/// 16^4 neighbourhood assignments times 4^4 valuations.
inline constexpr std::uint64_t kMaxExhaustiveStates = 16'777'216;

/// Groups of at most three of the bound agents, in pool order.
std::vector<Group> search_pool(const SearchBounds& b);

/// Frame conditions matching the extensions of `l` over `agents` and `pool`.
std::vector<FrameCondition> constraints_for(const LogicDescriptor& l, std::span<const AgentId> agents,
                                            std::span<const Group> pool);

/// Deterministic in (seed, draw). Draws the domain size, one random family
/// per agent and world, and the valuation, then repairs the model to satisfy
/// b.constraints. Throws ConstraintError if the repair cannot satisfy them.
AgentModel random_model(const SearchBounds& b, std::uint64_t draw);

/// Applies the fixed repair sequence for `constraints` and re-verifies.
AgentModel repair(AgentModel m, std::span<const FrameCondition> constraints);

struct SchemaTarget {
  SchemaId schema;
  SchemaMode mode = SchemaMode::AllSubsets;
  std::vector<Group> pool;  // search_pool(bounds) when empty
};

using SearchTarget = std::variant<Formula, SchemaTarget>;

struct Countermodel {
  AgentModel model;
  std::uint64_t index;  // draw, or position in enumeration order
  std::optional<std::size_t> world;                    // formula targets
  std::optional<SchemaCounterexample> schema_witness;  // schema targets
};

/// First model in enumeration (or draw) order refuting the target. An empty
/// result only means no countermodel exists within the bounds.
std::optional<Countermodel> find_countermodel(const SearchTarget& target, const SearchBounds& b);

/// Number of models the exhaustive enumerator visits for `b`. Throws
/// ResourceError when the state-space guard is exceeded.
std::uint64_t exhaustive_space_size(const SearchBounds& b, bool enumerate_valuations);

struct Violation {
  std::uint64_t draw;
  AgentModel model;
  SchemaId schema;
  SchemaCounterexample witness;
};

struct FuzzReport {
  std::uint64_t trials = 0;
  std::vector<Violation> violations;
};

/// Checks every schema of `l` in all-subsets mode on each random model.
/// b.constraints must contain the frame conditions matching `l`.
FuzzReport soundness_fuzz(const LogicDescriptor& l, const SearchBounds& b);

}  // namespace nbhd
