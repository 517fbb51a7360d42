#include <doctest.h>

#include "nbhd/error.hpp"
#include "nbhd/formula.hpp"
#include "oracles.hpp"

using namespace nbhd;
using F = Formula;

TEST_SUITE("formula") {

TEST_CASE("parse builds the expected trees") {
  CHECK(parse("p | ~p") == F::disjunction(F::atom("p"), F::negation(F::atom("p"))));
  CHECK(parse("[1,2](p & q) -> [1]p") ==
        F::implication(F::box(Group{1, 2}, F::conjunction(F::atom("p"), F::atom("q"))),
                       F::box(Group{1}, F::atom("p"))));
  CHECK(parse("  true&false ") == F::conjunction(F::top(), F::bottom()));
  CHECK(parse("[2,1,2]p") == F::box(Group{1, 2}, F::atom("p")));
}

TEST_CASE("precedence and associativity") {
  const F p = F::atom("p"), q = F::atom("q"), r = F::atom("r");
  CHECK(parse("p -> q -> r") == F::implication(p, F::implication(q, r)));
  CHECK(parse("p <-> q <-> r") == F::equivalence(F::equivalence(p, q), r));
  CHECK(parse("p | q & r") == F::disjunction(p, F::conjunction(q, r)));
  CHECK(parse("p & q | r") == F::disjunction(F::conjunction(p, q), r));
  CHECK(parse("~p & q") == F::conjunction(F::negation(p), q));
  CHECK(parse("[1]p & q") == F::conjunction(F::box(Group{1}, p), q));
  CHECK(parse("p | q -> r <-> p") == F::equivalence(F::implication(F::disjunction(p, q), r), p));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("[]p"), ParseError);
  CHECK_THROWS_AS(parse("[a]p"), ParseError);
  CHECK_THROWS_AS(parse("[-1]p"), ParseError);
  CHECK_THROWS_AS(parse("p &"), ParseError);
  CHECK_THROWS_AS(parse("(p"), ParseError);
  CHECK_THROWS_AS(parse("p q"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  try {
    parse("p & & q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
  try {
    parse("[]p");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("empty group") != std::string::npos);
  }
}

TEST_CASE("render") {
  CHECK(render(F::box(Group{1, 2}, F::disjunction(F::atom("p"), F::atom("r")))) == "[1,2](p | r)");
  CHECK(render(F::bottom()) == "false");
  CHECK(render(F::negation(F::negation(F::atom("p")))) == "~~p");
  CHECK(render(parse("(p -> q) -> r")) == "(p -> q) -> r");
  CHECK(render(parse("p -> (q -> r)")) == "p -> q -> r");
  CHECK(render(parse("(p & q) | r")) == "p & q | r");
  CHECK(render(parse("~(p | q)")) == "~(p | q)");
}

TEST_CASE("round trip on fuzzed formulas") {
  oracle::Gen g(20261019);
  for (int k = 0; k < 5000; ++k) {
    const F f = oracle::random_formula(g, 6);
    const std::string text = render(f);
    INFO(text);
    CHECK(parse(text) == f);
  }
}

TEST_CASE("boxed_atoms") {
  const auto u1 = boxed_atoms(parse("[1]p | q"));
  CHECK(u1 == std::set<F>{parse("[1]p"), parse("q")});
  const auto u2 = boxed_atoms(parse("[1][2]p"));
  CHECK(u2 == std::set<F>{parse("[1][2]p")});
  CHECK(boxed_atoms(F::bottom()).empty());
}

TEST_CASE("tautology examples") {
  CHECK(is_propositional_tautology(parse("p | ~p")));
  CHECK(is_propositional_tautology(parse("[1]p | ~[1]p")));
  CHECK_FALSE(is_propositional_tautology(parse("([1]p & [2]q) -> [1,2](p & q)")));
  CHECK(is_propositional_tautology(parse("true")));
  CHECK_FALSE(is_propositional_tautology(parse("false")));
  CHECK_FALSE(is_propositional_tautology(parse("[1](p | ~p)")));
}

TEST_CASE("tautology agrees with an independent truth table") {
  oracle::Gen g(7);
  int tautologies = 0;
  for (int k = 0; k < 4000; ++k) {
    // Few atoms and a shallow depth keep units at or below four while
    // producing a fair share of tautologies.
    F f = oracle::random_formula(g, 4, 2, {"p", "q"});
    if (g.below(3) == 0) f = F::disjunction(f, F::negation(f));
    if (boxed_atoms(f).size() > 4) continue;
    const bool expected = oracle::tautology(f);
    tautologies += expected;
    INFO(render(f));
    CHECK(is_propositional_tautology(f) == expected);
  }
  CHECK(tautologies > 100);
}

TEST_CASE("normalize uses the primitive basis") {
  std::function<bool(const F&)> primitive = [&](const F& f) {
    switch (f.kind()) {
      case F::Kind::Bottom:
      case F::Kind::Atom: return true;
      case F::Kind::Not:
      case F::Kind::Box: return primitive(f.body());
      case F::Kind::Or: return primitive(f.lhs()) && primitive(f.rhs());
      default: return false;
    }
  };
  oracle::Gen g(11);
  for (int k = 0; k < 500; ++k) CHECK(primitive(normalize(oracle::random_formula(g, 5))));
}

TEST_CASE("groups") {
  CHECK(parse_group("2, 1") == Group{1, 2});
  CHECK(Group{1, 2}.to_string() == "1,2");
  CHECK((Group{1} | Group{3}) == Group{1, 3});
  CHECK(Group{1}.is_disjoint_from(Group{2}));
  CHECK(Group{1}.is_subset_of(Group{1, 2}));
  CHECK_THROWS(parse_group(""));
  const std::vector<AgentId> agents{AgentId{1}, AgentId{2}, AgentId{3}};
  const auto pool = subsets_up_to(agents, 3);
  REQUIRE(pool.size() == 7);
  CHECK(pool[0] == Group{1});
  CHECK(pool[3] == Group{1, 2});
  CHECK(pool[5] == Group{2, 3});
  CHECK(pool[6] == Group{1, 2, 3});
}

TEST_CASE("conjoin nests to the right") {
  const std::vector<F> fs{parse("p"), parse("q"), parse("r")};
  CHECK(conjoin(fs) == parse("p & (q & r)"));
  CHECK(conjoin(std::span<const F>{}) == F::top());
}

}
