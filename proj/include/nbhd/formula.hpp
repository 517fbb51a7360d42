#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nbhd {

/// Element of the index set of agents.
struct AgentId {
  std::uint32_t value = 0;
  friend auto operator<=>(AgentId, AgentId) = default;
};

/// Nonempty finite set of agents, stored sorted and duplicate-free.
class Group {
 public:
  /// Throws SchemaError when `members` is empty.
  explicit Group(std::vector<AgentId> members);
  Group(std::initializer_list<std::uint32_t> ids);

  static Group singleton(AgentId agent) { return Group({agent}); }

  std::span<const AgentId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(AgentId agent) const;
  bool is_subset_of(const Group& other) const;
  bool is_disjoint_from(const Group& other) const;

  /// Comma-separated ids, e.g. "1,2".
  std::string to_string() const;

  friend Group operator|(const Group& a, const Group& b);
  friend bool operator==(const Group&, const Group&) = default;
  friend auto operator<=>(const Group& a, const Group& b) = default;

 private:
  std::vector<AgentId> members_;
};

/// Members of `a` not in `b`; empty when `a` is a subset of `b`.
std::vector<AgentId> difference(const Group& a, const Group& b);

/// Parses "1,2,3" (whitespace allowed). Throws ParseError.
Group parse_group(std::string_view text);

/// Orders groups by size, then lexicographically. Pools are kept in this order.
bool pool_order(const Group& a, const Group& b);

/// All nonempty subsets of `agents` with at most `max_size` members, in pool order.
std::vector<Group> subsets_up_to(std::span<const AgentId> agents, std::size_t max_size);

/// Immutable formula of the modal language. Copies share structure.
class Formula {
 public:
  enum class Kind : std::uint8_t { Bottom, Top, Atom, Not, Or, And, Implies, Iff, Box };

  static Formula bottom();
  static Formula top();
  static Formula atom(std::string name);
  static Formula negation(Formula body);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);
  static Formula box(Group group, Formula body);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  /// Atom name; empty for other kinds.
  const std::string& name() const;
  /// Left operand of a binary connective, or the body of Not/Box.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& body() const { return lhs(); }
  /// Group of a Box node. Undefined for other kinds.
  const Group& group() const;

  /// Number of nodes.
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Formula> children;
  std::vector<Group> group;  // zero or one element
  std::size_t size = 1;
};

inline Formula::Kind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline std::size_t Formula::size() const { return node_->size; }

/// Parses the ASCII formula grammar. Throws ParseError with a position.
Formula parse(std::string_view text);

/// Renders with minimal parentheses; parse(render(f)) == f.
std::string render(const Formula& f);

/// Rewrites And/Implies/Iff/Top into the basis {Bottom, Atom, Not, Or, Box}.
Formula normalize(const Formula& f);

/// Maximal Box-rooted subformulas together with all atoms outside boxes.
std::set<Formula> boxed_atoms(const Formula& f);

/// True iff `f` holds under every assignment to its boxed atoms.
bool is_propositional_tautology(const Formula& f);

/// Right-nested conjunction; Top for an empty list.
Formula conjoin(std::span<const Formula> conjuncts);

}  // namespace nbhd
