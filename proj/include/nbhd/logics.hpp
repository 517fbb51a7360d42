#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nbhd/model.hpp"

namespace nbhd {

struct SchemaId {
  enum class Kind { B1, B2, B3, B4, Nec, Conec, P, Cop, PG, TG, DI, RMG, CG, SA };
  Kind kind;
  std::optional<AgentId> agent;  // Nec, Conec, P, Cop, DI

  friend bool operator==(const SchemaId&, const SchemaId&) = default;
  friend auto operator<=>(const SchemaId&, const SchemaId&) = default;
};

/// Accepts "B1".."B4", "pg", "tg", "rmg", "cg", "sa" and "nec:i", "conec:i",
/// "p:i", "cop:i", "di:i" (case-insensitive). Throws ParseError.
SchemaId parse_schema(std::string_view text);
/// Display name, e.g. "B1", "NEC(2)", "T_G".
std::string display_name(const SchemaId& s);
/// File/CLI key, e.g. "b1", "nec:2".
std::string schema_key(const SchemaId& s);

/// Which metavariables a schema uses.
struct Metavariables {
  int groups = 0;  // G, H, J used in that order
  int sets = 0;    // phi, psi used in that order
};
Metavariables metavariables(SchemaId::Kind kind);

template <typename Set>
struct Binding {
  std::optional<Group> G, H, J;
  std::optional<Set> phi, psi;
  friend bool operator==(const Binding&, const Binding&) = default;
};
using SyntacticBinding = Binding<Formula>;
using SemanticBinding = Binding<WorldSet>;

/// Substitutes the binding into the schema. Throws SchemaError for a
/// missing metavariable or a violated B1 disjointness condition.
Formula instantiate_schema(const SchemaId& s, const SyntacticBinding& b);

struct LogicDescriptor {
  std::vector<SchemaId> extensions;
  bool replace_b1_with_cg = false;

  /// Active schemas: B1 (unless replaced), B2, B3, B4, then the extensions
  /// in order, deduplicated; CG is included whenever B1 is replaced.
  std::vector<SchemaId> schemas() const;
  bool includes(const SchemaId& s) const;
};

/// Binding under which `f` is literally an instance of `s`, if any.
std::optional<SyntacticBinding> match_schema(const Formula& f, const SchemaId& s);

/// First active schema of `l` (in LogicDescriptor::schemas order) that `f` instantiates.
std::optional<std::pair<SchemaId, SyntacticBinding>> is_axiom_instance(const Formula& f,
                                                                       const LogicDescriptor& l);

struct Justification {
  struct Taut {
    friend bool operator==(Taut, Taut) = default;
  };
  struct Axiom {
    std::optional<SchemaId> schema;  // any active schema when absent
    std::optional<SyntacticBinding> binding;
    friend bool operator==(const Axiom&, const Axiom&) = default;
  };
  /// Line `major` must be (line `minor` -> this line). 1-based.
  struct ModusPonens {
    std::size_t minor;
    std::size_t major;
    friend bool operator==(ModusPonens, ModusPonens) = default;
  };
  /// From line `from` = (a <-> b) infer [group]a <-> [group]b. 1-based.
  struct Replacement {
    std::size_t from;
    Group group;
    friend bool operator==(const Replacement&, const Replacement&) = default;
  };
  std::variant<Taut, Axiom, ModusPonens, Replacement> rule;
  friend bool operator==(const Justification&, const Justification&) = default;
};

struct ProofLine {
  Formula formula;
  Justification justification;
};

struct Proof {
  std::vector<ProofLine> lines;
  /// Premises selected for an entailment certificate, in conjunction order.
  std::vector<Formula> premises;
};

struct ProofVerdict {
  bool accepted = false;
  std::size_t line = 0;  // 1-based line of rejection; 0 when accepted
  std::string reason;
  std::size_t length = 0;
};

ProofVerdict check_proof(const Proof& p, const LogicDescriptor& l);

/// Accepted iff `p` is an accepted proof whose last line is
/// (psi_1 & (psi_2 & ...)) -> phi for p.premises, or phi itself when there
/// are no premises. Throws SchemaError if a premise is not in `gamma`.
ProofVerdict check_entailment_certificate(std::span<const Formula> gamma, const Formula& phi,
                                          const Proof& p, const LogicDescriptor& l);

enum class SchemaMode { AllSubsets, DefinableOnly };

struct SchemaCounterexample {
  SemanticBinding binding;
  std::size_t world;
};

struct SchemaVerdict {
  bool valid = true;
  std::optional<SchemaCounterexample> counterexample;
  /// Set in definable-only mode when all-subsets mode finds a counterexample
  /// that the definable sets miss.
  std::optional<SchemaCounterexample> all_subsets_counterexample;
};

/// Quantifies the set metavariables over all subsets (|W| <= 6) or the
/// definable sets, and the group metavariables over `pool` (B1: disjoint
/// pairs only). The first counterexample is least by world, then group
/// tuple in pool order, then sets ascending.
SchemaVerdict check_schema_semantically(const Model& m, const SchemaId& s, SchemaMode mode,
                                        std::span<const Group> pool);
/// Same, reusing a neighbourhood cache for `m`.
SchemaVerdict check_schema_semantically(const Model& m, const SchemaId& s, SchemaMode mode,
                                        std::span<const Group> pool, NeighbourhoodCache& cache);

/// Human-readable binding, e.g. "G={1}, H={2}, phi={wp,wr}".
std::string format_binding(const Domain& d, const SemanticBinding& b);

}  // namespace nbhd
