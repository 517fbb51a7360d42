#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbhd/model.hpp"

namespace nbhd {

struct FrameCondition {
  enum class Kind {
    Nec,               // W in N_i(w)
    Conec,             // W not in N_i(w)
    P,                 // empty set not in N_i(w)
    Cop,               // empty set in N_i(w)
    PGroup,            // empty set not in N_G(w)
    Reflexive,         // w in X for all X in N_i(w), all i
    BinaryConsistent,  // X in N_i(w) implies W\X not in N_i(w)
    Monotone,          // N_i(w) closed under supersets
    IntersectionClosed
  };
  Kind kind;
  std::optional<AgentId> agent;
  std::optional<Group> group;

  static FrameCondition nec(AgentId i) { return {Kind::Nec, i, {}}; }
  static FrameCondition conec(AgentId i) { return {Kind::Conec, i, {}}; }
  static FrameCondition p(AgentId i) { return {Kind::P, i, {}}; }
  static FrameCondition cop(AgentId i) { return {Kind::Cop, i, {}}; }
  static FrameCondition pgroup(Group g) { return {Kind::PGroup, {}, std::move(g)}; }
  static FrameCondition reflexive() { return {Kind::Reflexive, {}, {}}; }
  static FrameCondition binary_consistent() { return {Kind::BinaryConsistent, {}, {}}; }
  static FrameCondition monotone() { return {Kind::Monotone, {}, {}}; }
  static FrameCondition intersection_closed() { return {Kind::IntersectionClosed, {}, {}}; }

  friend bool operator==(const FrameCondition&, const FrameCondition&) = default;
};

/// nec:i, conec:i, p:i, cop:i, pg:1,2, reflexive, bincons, monotone, intclosed.
/// Throws ParseError.
FrameCondition parse_condition(std::string_view text);
std::string to_string(const FrameCondition& c);

struct FrameWitness {
  std::size_t world;
  std::string owner;  // agent id or group, e.g. "2" or "1,2"
  WorldSet set;
};

struct FrameVerdict {
  bool holds = true;
  std::optional<FrameWitness> witness;
  std::vector<std::string> notes;
};

/// Universal check over all worlds. On a GeneralModel the per-agent
/// conditions are read off the primitive entries ({i} for agent i, every
/// stored group for the structural conditions). The witness is the least
/// (world, owner, set) counterexample.
FrameVerdict check_condition(const Model& m, const FrameCondition& c);

/// Replaces each N_i(w) by all supersets of its members.
AgentModel close_under_supersets(const AgentModel& m);
/// Replaces each N_i(w) by all intersections of nonempty subfamilies.
AgentModel close_under_intersections(const AgentModel& m);

/// Model-level wrappers; throw ModelError for a GeneralModel.
Model close_under_supersets(const Model& m);
Model close_under_intersections(const Model& m);

}  // namespace nbhd
