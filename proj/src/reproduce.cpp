#include "nbhd/reproduce.hpp"

namespace nbhd {

std::vector<Group> independence_pool() {
  const std::vector<AgentId> agents{AgentId{1}, AgentId{2}, AgentId{3}};
  return subsets_up_to(agents, 3);
}

bool IndependenceRow::as_expected() const {
  const auto own = static_cast<std::size_t>(fixture);
  for (std::size_t k = 0; k < verdicts.size(); ++k)
    if (verdicts[k].valid == (k == own)) return false;
  return true;
}

std::vector<IndependenceRow> reproduce_independence() {
  const auto pool = independence_pool();
  const SchemaId base[4] = {{SchemaId::Kind::B1, {}}, {SchemaId::Kind::B2, {}},
                            {SchemaId::Kind::B3, {}}, {SchemaId::Kind::B4, {}}};
  std::vector<IndependenceRow> rows;
  for (auto id : {FixtureId::M1, FixtureId::M2, FixtureId::M3, FixtureId::M4}) {
    const Model m = builtin_fixture(id);
    NeighbourhoodCache cache(m);
    IndependenceRow row{id, {}};
    for (std::size_t k = 0; k < 4; ++k)
      row.verdicts[k] = check_schema_semantically(m, base[k], SchemaMode::AllSubsets, pool, cache);
    rows.push_back(std::move(row));
  }
  return rows;
}

bool NonReflexiveResult::as_expected() const {
  if (!singletons.valid || with_group.valid) return false;
  const auto& ce = *with_group.counterexample;
  return ce.world == 0 && ce.binding.G == Group{1, 2} && ce.binding.phi && ce.binding.phi->is_empty();
}

NonReflexiveResult reproduce_nonreflexive() {
  const Model m = builtin_fixture(FixtureId::NonReflexive);
  const SchemaId tg{SchemaId::Kind::TG, {}};
  NonReflexiveResult r;
  r.singleton_pool = {Group{1}, Group{2}};
  r.full_pool = {Group{1}, Group{2}, Group{1, 2}};
  r.singletons = check_schema_semantically(m, tg, SchemaMode::DefinableOnly, r.singleton_pool);
  r.with_group = check_schema_semantically(m, tg, SchemaMode::DefinableOnly, r.full_pool);
  return r;
}

}  // namespace nbhd
