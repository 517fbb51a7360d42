#pragma once

#include <array>
#include <vector>

#include "nbhd/logics.hpp"

namespace nbhd {

/// One independence model checked against B1..B4 in all-subsets mode.
struct IndependenceRow {
  FixtureId fixture;
  std::array<SchemaVerdict, 4> verdicts;  // B1, B2, B3, B4

  /// Refutes exactly the schema with the fixture's own number.
  bool as_expected() const;
};

/// Agents {1,2,3}; the pool is every nonempty subset of them.
std::vector<Group> independence_pool();
std::vector<IndependenceRow> reproduce_independence();

/// T_G on the two-world non-reflexive model in definable-only mode.
struct NonReflexiveResult {
  std::vector<Group> singleton_pool;  // {1}, {2}
  SchemaVerdict singletons;
  std::vector<Group> full_pool;       // {1}, {2}, {1,2}
  SchemaVerdict with_group;

  bool as_expected() const;
};
NonReflexiveResult reproduce_nonreflexive();

}  // namespace nbhd
