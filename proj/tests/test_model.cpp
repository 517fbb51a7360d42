#include <doctest.h>

#include "nbhd/error.hpp"
#include "nbhd/model.hpp"
#include "oracles.hpp"

using namespace nbhd;

namespace {

WorldSet ws(const Domain& d, std::initializer_list<const char*> labels) {
  WorldSet x = d.empty_set();
  for (const char* l : labels) x = x.with(d.index_of(l));
  return x;
}

// Closure of {empty, W, valuation sets} under complement, union and the box
// images of the pool, computed naively for comparison.
std::set<oracle::Bits> naive_definable(const AgentModel& m, const std::vector<Group>& pool) {
  const std::size_t n = m.domain.size();
  std::set<oracle::Bits> s{0, oracle::full(n)};
  for (const auto& [_, x] : m.valuation) s.insert(x.bits());
  for (bool grew = true; grew;) {
    grew = false;
    std::set<oracle::Bits> next = s;
    for (auto a : s) {
      next.insert(~a & oracle::full(n));
      for (auto b : s) next.insert(a | b);
      for (const auto& g : pool) {
        oracle::Bits img = 0;
        for (std::size_t w = 0; w < n; ++w)
          if (oracle::group_nbhd(m, g, w).contains(a)) img |= oracle::Bits{1} << w;
        next.insert(img);
      }
    }
    if (next != s) {
      s = std::move(next);
      grew = true;
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("pointwise intersection on the first fixture read per agent") {
  const Domain d({"wp", "wq", "wr"});
  AgentModel m{d, {}, {}};
  m.agents[AgentId{1}] = NeighbourhoodMap(3, Family({ws(d, {"wp", "wr"}), d.empty_set()}));
  m.agents[AgentId{2}] = NeighbourhoodMap(3, Family({ws(d, {"wq", "wr"}), d.empty_set()}));
  const Model model(m);
  CHECK(group_neighbourhood(model, Group{1, 2}, 0) == Family({ws(d, {"wr"}), d.empty_set()}));
  CHECK(group_neighbourhood(model, Group{1}, 1) == m.agents[AgentId{1}][1]);
  CHECK(group_neighbourhood(model, Group{3}, 0).empty());
  CHECK(group_neighbourhood(model, Group{1, 3}, 0).empty());
}

TEST_CASE("general model defaults to the family holding only the empty set") {
  const Model m1 = builtin_fixture(FixtureId::M1);
  const Domain& d = m1.domain();
  CHECK(group_neighbourhood(m1, Group{1, 2}, 0) == Family({d.empty_set()}));
  CHECK(group_neighbourhood(m1, Group{1}, 2) == Family({ws(d, {"wp", "wr"}), d.empty_set()}));
}

TEST_CASE("truth sets on the fixtures") {
  const Model m1 = builtin_fixture(FixtureId::M1);
  const Domain& d = m1.domain();
  CHECK(truth_set(m1, parse("p | r")) == ws(d, {"wp", "wr"}));
  CHECK(truth_set(m1, parse("[1](p|r) & [2](q|r)")).contains(0));
  CHECK(truth_set(m1, parse("[1,2]((p|r)&(q|r))")) == d.empty_set());

  const Model nr = builtin_fixture(FixtureId::NonReflexive);
  CHECK(satisfies(nr, nr.domain().index_of("w"), parse("[1,2]false")));
  CHECK(satisfies(nr, 1, parse("true")));
  CHECK_FALSE(valid_on_model(nr, parse("[1,2]false -> false")));

  const Model m2 = builtin_fixture(FixtureId::M2);
  CHECK(satisfies(m2, m2.domain().index_of("wp"), parse("[1,2]true & ~[1]true")));

  const Model m3 = builtin_fixture(FixtureId::M3);
  CHECK_FALSE(valid_on_model(m3, parse("([1]p & [1,2,3]p) -> [1,2]p")));
  CHECK(valid_on_model(m3, parse("p -> p")));
}

TEST_CASE("fixture shapes") {
  const Model nr = builtin_fixture(FixtureId::NonReflexive);
  REQUIRE(nr.as_agent_model());
  const Domain& d = nr.domain();
  CHECK(d.labels().size() == 2);
  CHECK(nr.as_agent_model()->family(AgentId{1}, 1) == Family({ws(d, {"w"})}));
  CHECK(nr.as_agent_model()->family(AgentId{2}, 0) == Family({ws(d, {"v"})}));
  for (auto id : {FixtureId::M1, FixtureId::M2, FixtureId::M3, FixtureId::M4})
    CHECK(builtin_fixture(id).as_general_model());
  const Model m4 = builtin_fixture(FixtureId::M4);
  const Domain& d4 = m4.domain();
  CHECK(group_neighbourhood(m4, Group{1, 3}, 1) == Family({ws(d4, {"wp"}), d4.empty_set()}));
  CHECK(group_neighbourhood(m4, Group{1, 2, 3}, 2) == Family({ws(d4, {"wp", "wq"}), d4.empty_set()}));
  const Model m2 = builtin_fixture(FixtureId::M2);
  CHECK(group_neighbourhood(m2, Group{2}, 0).size() == 7);
  CHECK(group_neighbourhood(m2, Group{2, 3}, 0).size() == 8);
  CHECK(parse_fixture_id("nonreflexive") == FixtureId::NonReflexive);
  CHECK_THROWS(parse_fixture_id("M5"));
}

TEST_CASE("truth sets agree with the independent evaluator") {
  oracle::Gen g(42);
  for (int k = 0; k < 300; ++k) {
    const AgentModel am = oracle::random_agent_model(g, 4, 3);
    const Model m(am);
    NeighbourhoodCache cache(m);
    for (int j = 0; j < 10; ++j) {
      const Formula f = oracle::random_formula(g, 4);
      INFO(render(f));
      const auto expected = oracle::eval(am, f);
      CHECK(truth_set(m, f).bits() == expected);
      CHECK(truth_set(m, f, cache).bits() == expected);
    }
  }
}

TEST_CASE("normalization preserves truth sets") {
  oracle::Gen g(5);
  for (int k = 0; k < 200; ++k) {
    const Model m(oracle::random_agent_model(g, 4, 3));
    for (int j = 0; j < 5; ++j) {
      const Formula f = oracle::random_formula(g, 4);
      CHECK(truth_set(m, f) == truth_set(m, normalize(f)));
    }
  }
}

TEST_CASE("boolean clauses") {
  oracle::Gen g(9);
  for (int k = 0; k < 100; ++k) {
    const Model m(oracle::random_agent_model(g, 4, 2));
    const Formula f = oracle::random_formula(g, 3, 2), h = oracle::random_formula(g, 3, 2);
    CHECK(truth_set(m, Formula::negation(f)) == truth_set(m, f).complement());
    CHECK(truth_set(m, Formula::disjunction(f, h)) == (truth_set(m, f) | truth_set(m, h)));
    CHECK(truth_set(m, Formula::bottom()).is_empty());
  }
}

TEST_CASE("pointwise decomposition and the B2 property") {
  oracle::Gen g(1234);
  const std::vector<std::pair<Group, Group>> splits{
      {Group{1}, Group{2}}, {Group{1}, Group{2, 3}}, {Group{1, 3}, Group{2}}, {Group{3}, Group{1, 2}}};
  for (int k = 0; k < 300; ++k) {
    const AgentModel am = oracle::random_agent_model(g, 4, 3);
    const Model m(am);
    for (std::size_t w = 0; w < m.size(); ++w) {
      for (const auto& [G, H] : splits) {
        const Family fg = group_neighbourhood(m, G, w), fh = group_neighbourhood(m, H, w);
        std::vector<WorldSet> products;
        for (auto x : fg)
          for (auto y : fh) products.push_back(x & y);
        const Family joint = group_neighbourhood(m, G | H, w);
        CHECK(joint == Family(products));
        if (joint.contains(m.domain().full_set())) CHECK(fg.contains(m.domain().full_set()));
      }
    }
  }
}

TEST_CASE("definable sets: examples") {
  const Model nr = builtin_fixture(FixtureId::NonReflexive);
  const std::vector<Group> pool{Group{1}, Group{2}, Group{1, 2}};
  const auto ds = definable_sets(nr, pool);
  CHECK(ds.sets() == std::vector<WorldSet>{WorldSet(2, 0), WorldSet(2, 3)});

  const Model m1 = builtin_fixture(FixtureId::M1);
  CHECK(definable_sets(m1, pool).size() == 8);
  CHECK(definable_sets(m1, std::vector<Group>{}).size() == 8);

  AgentModel bare{Domain::unlabelled(3), {}, {}};
  CHECK(definable_sets(Model(bare), std::vector<Group>{}).size() == 2);
}

TEST_CASE("definable sets: closure, minimality and witnesses") {
  oracle::Gen g(77);
  for (int k = 0; k < 200; ++k) {
    const AgentModel am = oracle::random_agent_model(g, 3, 2, {"p"});
    const Model m(am);
    const std::vector<Group> pool{Group{1}, Group{2}, Group{1, 2}};
    const auto ds = definable_sets(m, pool);
    std::set<oracle::Bits> got;
    for (auto x : ds.sets()) got.insert(x.bits());
    // The naive closure is the least fixpoint, so equality gives both
    // closure and minimality.
    CHECK(got == naive_definable(am, pool));
    for (auto x : ds.sets()) {
      const Formula& wit = ds.witness(x);
      CHECK(truth_set(m, wit) == x);
    }
  }
}

TEST_CASE("resource guards and validation") {
  AgentModel m{Domain::unlabelled(2), {}, {}};
  CHECK_THROWS_AS(group_neighbourhood(Model(m), Group{1, 2, 3, 4, 5, 6, 7, 8, 9}, 0), ResourceError);
  CHECK_THROWS_AS(Domain(std::vector<std::string>{"a", "a"}), ModelError);
  CHECK_THROWS_AS(Domain(std::vector<std::string>{}), ModelError);
  const Model nr = builtin_fixture(FixtureId::NonReflexive);
  CHECK_THROWS(satisfies(nr, 5, parse("p")));
}

TEST_CASE("default pool") {
  const Model m1 = builtin_fixture(FixtureId::M1);
  const auto pool = default_pool(m1);
  CHECK(std::find(pool.begin(), pool.end(), Group{1, 2}) != pool.end());
  CHECK(std::is_sorted(pool.begin(), pool.end(), pool_order));
}

}
