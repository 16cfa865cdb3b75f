#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "reoptbench/error.hpp"
#include "reoptbench/oracle.hpp"

using namespace reoptbench;

TEST_SUITE("oracle") {
  TEST_CASE("single binary") {
    Instance in;
    in.variables = {{"x", VarKind::binary, 0, 1, 1}};
    const OracleResult r = enumerate_solve(in, 1.0);
    CHECK(r.status == SolveStatus::optimal);
    CHECK(r.outcome.primal_bound == 0.0);
    CHECK(r.outcome.dual_bound == 0.0);
    CHECK(r.solution->values == std::vector<double>{0});
    CHECK(r.assignments_visited == 2);
  }

  TEST_CASE("infeasible instance") {
    const OracleResult r = enumerate_solve(fixtures::infeasible_binary(4), 1.0);
    CHECK(r.status == SolveStatus::timeout_nofeas);
    CHECK_FALSE(r.outcome.has_feasible_solution);
    CHECK_FALSE(r.outcome.primal_bound);
    CHECK(r.outcome.dual_bound == kInfinity);
    CHECK(instance_score(r.outcome).nofeas == 1);
  }

  TEST_CASE("agrees with reverse-order enumeration") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 40; ++k) {
      const Sense sense = k % 2 ? Sense::maximize : Sense::minimize;
      const Instance in = fixtures::random_binary(rng, 12, 3, sense);
      const auto bf = fixtures::brute_force(in);
      const OracleResult r = enumerate_solve(in, 30.0);
      if (!bf.optimum) {
        CHECK(r.status == SolveStatus::timeout_nofeas);
        continue;
      }
      REQUIRE(r.status == SolveStatus::optimal);
      CHECK(*r.outcome.primal_bound == *bf.optimum);
      CHECK(fixtures::dense_feasible(in, r.solution->values));
    }
  }

  TEST_CASE("general integers") {
    const Instance in = [] {
      Instance i;
      i.variables = {{"a", VarKind::general_integer, -2, 3, 1},
                     {"b", VarKind::general_integer, 0, 4, -2}};
      i.rows = {{"r", {{0, 1}, {1, 1}}, 1, 4}};
      return i;
    }();
    const auto bf = fixtures::brute_force(in);
    const OracleResult r = enumerate_solve(in, 5.0);
    CHECK(*r.outcome.primal_bound == *bf.optimum);
    CHECK(enumeration_size(in) == 30);
  }

  TEST_CASE("first optimum in lexicographic order is kept") {
    Instance in;
    in.variables = {{"a", VarKind::binary, 0, 1, 1}, {"b", VarKind::binary, 0, 1, 1}};
    in.rows = {{"r", {{0, 1}, {1, 1}}, 1, kInfinity}};
    const OracleResult r = enumerate_solve(in, 1.0);
    CHECK(r.solution->values == std::vector<double>{0, 1});
  }

  TEST_CASE("capability limits") {
    Instance in;
    in.variables = {{"g", VarKind::general_integer, 0, kInfinity, 1}};
    CHECK_THROWS_AS(enumeration_size(in), CapabilityError);
    in.variables = {{"x", VarKind::continuous, 0, 5, 1}};
    CHECK_THROWS_AS(enumerate_solve(in, 1.0), CapabilityError);
    Instance wide;
    for (int j = 0; j < 30; ++j) {
      wide.variables.push_back({"b" + std::to_string(j), VarKind::binary, 0, 1, 1});
    }
    CHECK_THROWS_AS(enumeration_size(wide), CapabilityError);
    CHECK(enumeration_size(wide, std::uint64_t{1} << 30) == std::uint64_t{1} << 30);
  }

  TEST_CASE("time limits") {
    Instance in;
    in.variables = {{"x", VarKind::binary, 0, 1, 1}};
    CHECK_THROWS_AS(enumerate_solve(in, -1.0), InvalidInputError);
    const OracleResult r = enumerate_solve(in, 0.0);
    CHECK(r.status != SolveStatus::optimal);
  }

  TEST_CASE("warm start and cutoff") {
    std::mt19937_64 rng(77);
    const Instance in = fixtures::random_binary(rng, 10, 2, Sense::minimize);
    const OracleResult cold = enumerate_solve(in, 10.0);
    REQUIRE(cold.status == SolveStatus::optimal);

    EnumerationOptions warm;
    warm.warm_start = cold.solution;
    const OracleResult w = enumerate_solve(in, 10.0, warm);
    CHECK(w.status == SolveStatus::optimal);
    CHECK(w.outcome.primal_bound == cold.outcome.primal_bound);

    EnumerationOptions tight;
    tight.cutoff = *cold.outcome.primal_bound;
    const OracleResult c = enumerate_solve(in, 10.0, tight);
    CHECK(c.status == SolveStatus::timeout_nofeas);
    CHECK(c.outcome.dual_bound == *cold.outcome.primal_bound);
  }
}
