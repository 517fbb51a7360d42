#include "nbhd/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>

#include "nbhd/error.hpp"

namespace nbhd {

// ---------------------------------------------------------------------------
// Group

Group::Group(std::vector<AgentId> members) : members_(std::move(members)) {
  if (members_.empty()) throw SchemaError("group must be nonempty");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Group::Group(std::initializer_list<std::uint32_t> ids) : Group([&] {
  std::vector<AgentId> out;
  for (auto id : ids) out.push_back(AgentId{id});
  return out;
}()) {}

bool Group::contains(AgentId agent) const {
  return std::binary_search(members_.begin(), members_.end(), agent);
}

bool Group::is_subset_of(const Group& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

bool Group::is_disjoint_from(const Group& other) const {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a == *b) return false;
    if (*a < *b) ++a; else ++b;
  }
  return true;
}

std::string Group::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(members_[i].value);
  }
  return out;
}

Group operator|(const Group& a, const Group& b) {
  std::vector<AgentId> out;
  std::set_union(a.members_.begin(), a.members_.end(), b.members_.begin(), b.members_.end(),
                 std::back_inserter(out));
  return Group(std::move(out));
}

std::vector<AgentId> difference(const Group& a, const Group& b) {
  std::vector<AgentId> out;
  std::set_difference(a.members().begin(), a.members().end(), b.members().begin(),
                      b.members().end(), std::back_inserter(out));
  return out;
}

bool pool_order(const Group& a, const Group& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::vector<Group> subsets_up_to(std::span<const AgentId> agents, std::size_t max_size) {
  std::vector<AgentId> sorted(agents.begin(), agents.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() > 20) throw ResourceError("too many agents to enumerate groups");
  std::vector<Group> out;
  for (std::uint32_t mask = 1; mask < (1u << sorted.size()); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > max_size) continue;
    std::vector<AgentId> members;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (mask >> i & 1u) members.push_back(sorted[i]);
    out.emplace_back(std::move(members));
  }
  std::sort(out.begin(), out.end(), pool_order);
  return out;
}

// ---------------------------------------------------------------------------
// Formula construction

namespace {

std::size_t children_size(const std::vector<Formula>& children) {
  std::size_t total = 1;
  for (const auto& c : children) total += c.size();
  return total;
}

}  // namespace

Formula Formula::bottom() {
  static const Formula f(std::make_shared<const Node>(Node{Kind::Bottom, {}, {}, {}, 1}));
  return f;
}

Formula Formula::top() {
  static const Formula f(std::make_shared<const Node>(Node{Kind::Top, {}, {}, {}, 1}));
  return f;
}

Formula Formula::atom(std::string name) {
  return Formula(std::make_shared<const Node>(Node{Kind::Atom, std::move(name), {}, {}, 1}));
}

Formula Formula::negation(Formula body) {
  std::vector<Formula> children{std::move(body)};
  auto size = children_size(children);
  return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, std::move(children), {}, size}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  std::vector<Formula> children{std::move(lhs), std::move(rhs)};
  auto size = children_size(children);
  return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, std::move(children), {}, size}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  std::vector<Formula> children{std::move(lhs), std::move(rhs)};
  auto size = children_size(children);
  return Formula(std::make_shared<const Node>(Node{Kind::And, {}, std::move(children), {}, size}));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  std::vector<Formula> children{std::move(lhs), std::move(rhs)};
  auto size = children_size(children);
  return Formula(
      std::make_shared<const Node>(Node{Kind::Implies, {}, std::move(children), {}, size}));
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
  std::vector<Formula> children{std::move(lhs), std::move(rhs)};
  auto size = children_size(children);
  return Formula(std::make_shared<const Node>(Node{Kind::Iff, {}, std::move(children), {}, size}));
}

Formula Formula::box(Group group, Formula body) {
  std::vector<Formula> children{std::move(body)};
  auto size = children_size(children);
  return Formula(std::make_shared<const Node>(
      Node{Kind::Box, {}, std::move(children), {std::move(group)}, size}));
}

const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }
const Group& Formula::group() const { return node_->group.at(0); }

bool operator==(const Formula& a, const Formula& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
  if (auto c = a.node_->group <=> b.node_->group; c != 0) return c;
  const auto& ac = a.node_->children;
  const auto& bc = b.node_->children;
  for (std::size_t i = 0; i < ac.size() && i < bc.size(); ++i)
    if (auto c = ac[i] <=> bc[i]; c != 0) return c;
  return ac.size() <=> bc.size();
}

Formula conjoin(std::span<const Formula> conjuncts) {
  if (conjuncts.empty()) return Formula::top();
  Formula out = conjuncts.back();
  for (std::size_t i = conjuncts.size() - 1; i-- > 0;)
    out = Formula::conjunction(conjuncts[i], out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_iff();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

  Group parse_group_list() {
    std::vector<AgentId> ids;
    skip_ws();
    ids.push_back(parse_nat());
    while (accept(",")) ids.push_back(parse_nat());
    return Group(std::move(ids));
  }

  void expect_end() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept("<->")) f = Formula::equivalence(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept("->")) return Formula::implication(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = Formula::disjunction(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conjunction(f, parse_unary());
    return f;
  }

  AgentId parse_nat() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer agent id");
    if (pos_ - start > 9) {
      pos_ = start;
      fail("agent id out of range");
    }
    return AgentId{static_cast<std::uint32_t>(std::stoul(std::string(text_.substr(start, pos_ - start))))};
  }

  Formula parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept("~")) return Formula::negation(parse_unary());
    if (accept("[")) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ']') fail("empty group");
      Group g = parse_group_list();
      expect("]");
      return Formula::box(std::move(g), parse_unary());
    }
    if (accept("(")) {
      Formula f = parse_iff();
      expect(")");
      return f;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '\''))
        ++pos_;
      std::string ident(text_.substr(start, pos_ - start));
      if (ident == "true") return Formula::top();
      if (ident == "false") return Formula::bottom();
      return Formula::atom(std::move(ident));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

Group parse_group(std::string_view text) {
  Parser p(text);
  Group g = p.parse_group_list();
  p.expect_end();
  return g;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Binding strength; higher binds tighter.
int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    default: return 5;
  }
}

void render_into(const Formula& f, int min_prec, std::string& out);

void render_child(const Formula& f, int min_prec, std::string& out) {
  if (precedence(f.kind()) < min_prec) {
    out += '(';
    render_into(f, 0, out);
    out += ')';
  } else {
    render_into(f, min_prec, out);
  }
}

void render_into(const Formula& f, int, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Bottom: out += "false"; return;
    case K::Top: out += "true"; return;
    case K::Atom: out += f.name(); return;
    case K::Not:
      out += '~';
      render_child(f.body(), 5, out);
      return;
    case K::Box:
      out += '[';
      out += f.group().to_string();
      out += ']';
      render_child(f.body(), 5, out);
      return;
    default: break;
  }
  int p = precedence(f.kind());
  const char* op = f.is(K::Iff) ? " <-> " : f.is(K::Implies) ? " -> " : f.is(K::Or) ? " | " : " & ";
  bool right_assoc = f.is(K::Implies);
  render_child(f.lhs(), right_assoc ? p + 1 : p, out);
  out += op;
  render_child(f.rhs(), right_assoc ? p : p + 1, out);
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_into(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Normalization and propositional reasoning

Formula normalize(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Bottom:
    case K::Atom: return f;
    case K::Top: return Formula::negation(Formula::bottom());
    case K::Not: return Formula::negation(normalize(f.body()));
    case K::Or: return Formula::disjunction(normalize(f.lhs()), normalize(f.rhs()));
    case K::And:
      return Formula::negation(Formula::disjunction(Formula::negation(normalize(f.lhs())),
                                                    Formula::negation(normalize(f.rhs()))));
    case K::Implies: return Formula::disjunction(Formula::negation(normalize(f.lhs())), normalize(f.rhs()));
    case K::Iff: {
      Formula a = normalize(f.lhs());
      Formula b = normalize(f.rhs());
      Formula ab = Formula::disjunction(Formula::negation(a), b);
      Formula ba = Formula::disjunction(Formula::negation(b), a);
      return Formula::negation(
          Formula::disjunction(Formula::negation(ab), Formula::negation(ba)));
    }
    case K::Box: return Formula::box(f.group(), normalize(f.body()));
  }
  return f;
}

namespace {

void collect_units(const Formula& f, std::set<Formula>& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::Box: out.insert(f); return;
    case K::Bottom:
    case K::Top: return;
    case K::Not: collect_units(f.body(), out); return;
    default:
      collect_units(f.lhs(), out);
      collect_units(f.rhs(), out);
  }
}

// Truth table over 64 consecutive assignments; bit k of the result is the
// value under assignment (block * 64 + k).
std::uint64_t eval_block(const Formula& f, const std::map<Formula, std::size_t>& index,
                         std::uint64_t block) {
  static constexpr std::uint64_t kColumns[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Bottom: return 0;
    case K::Top: return ~0ull;
    case K::Atom:
    case K::Box: {
      std::size_t i = index.at(f);
      if (i < 6) return kColumns[i];
      return (block >> (i - 6) & 1u) ? ~0ull : 0ull;
    }
    case K::Not: return ~eval_block(f.body(), index, block);
    case K::Or: return eval_block(f.lhs(), index, block) | eval_block(f.rhs(), index, block);
    case K::And: return eval_block(f.lhs(), index, block) & eval_block(f.rhs(), index, block);
    case K::Implies: return ~eval_block(f.lhs(), index, block) | eval_block(f.rhs(), index, block);
    case K::Iff: return ~(eval_block(f.lhs(), index, block) ^ eval_block(f.rhs(), index, block));
  }
  return 0;
}

}  // namespace

std::set<Formula> boxed_atoms(const Formula& f) {
  std::set<Formula> out;
  collect_units(f, out);
  return out;
}

bool is_propositional_tautology(const Formula& f) {
  auto units = boxed_atoms(f);
  if (units.size() > 30) throw ResourceError("too many propositional units for a truth table");
  std::map<Formula, std::size_t> index;
  for (const auto& u : units) index.emplace(u, index.size());
  const std::size_t k = units.size();
  const std::uint64_t mask = k >= 6 ? ~0ull : ((1ull << (1u << k)) - 1);
  const std::uint64_t blocks = k > 6 ? (1ull << (k - 6)) : 1;
  for (std::uint64_t b = 0; b < blocks; ++b)
    if ((eval_block(f, index, b) & mask) != mask) return false;
  return true;
}

}  // namespace nbhd
