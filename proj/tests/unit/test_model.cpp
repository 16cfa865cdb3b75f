#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "reoptbench/error.hpp"
#include "reoptbench/model.hpp"
#include "reoptbench/oracle.hpp"
#include "reoptbench/solution_file.hpp"

using namespace reoptbench;

TEST_SUITE("model") {
  TEST_CASE("objective value") {
    Instance in;
    in.variables = {{"a", VarKind::continuous, -kInfinity, kInfinity, 2},
                    {"b", VarKind::continuous, -kInfinity, kInfinity, -1}};
    CHECK(objective_value(in, Solution{{0, 0}}) == 0.0);
    CHECK(objective_value(in, Solution{{3, 4}}) == 2.0);
    in.objective_constant = 1.5;
    CHECK(objective_value(in, Solution{{3, 4}}) == 3.5);
    CHECK_THROWS_AS(objective_value(in, Solution{{1}}), StructuralError);
  }

  TEST_CASE("objective of a knapsack optimum matches brute force") {
    std::mt19937_64 rng(11);
    const Instance in = fixtures::random_binary(rng, 8, 2, Sense::maximize);
    const auto bf = fixtures::brute_force(in);
    REQUIRE(bf.optimum);
    const OracleResult r = enumerate_solve(in, 10.0);
    REQUIRE(r.solution);
    CHECK(objective_value(in, *r.solution) == *bf.optimum);
  }

  TEST_CASE("feasibility at the bounds with slack rows") {
    Instance in;
    in.variables = {{"x", VarKind::continuous, 1, 3, 0}, {"y", VarKind::general_integer, -2, 5, 0}};
    in.rows = {{"r", {{0, 1}, {1, 1}}, -kInfinity, 100}};
    for (const Solution& s : {Solution{{1, -2}}, Solution{{3, 5}}}) {
      const FeasReport rep = check_feasibility(in, s);
      CHECK(rep.feasible);
      CHECK(rep.max_bound_violation == 0.0);
      CHECK(rep.max_row_violation == 0.0);
      CHECK(rep.max_integrality_violation == 0.0);
    }
  }

  TEST_CASE("fractional binary is infeasible") {
    Instance in;
    in.variables = {{"b", VarKind::binary, 0, 1, 1}};
    const FeasReport rep = check_feasibility(in, Solution{{0.5}});
    CHECK_FALSE(rep.feasible);
    CHECK(rep.max_integrality_violation == 0.5);
    CHECK(rep.worst_offender == "b");
  }

  TEST_CASE("NaN solution values are rejected") {
    Instance in;
    in.variables = {{"x", VarKind::continuous, 0, 1, 1}};
    CHECK_THROWS_AS(check_feasibility(in, Solution{{std::nan("")}}), InvalidInputError);
  }

  TEST_CASE("feasibility agrees with a dense re-check on random points") {
    const Instance in = fixtures::mixed();
    validate(in);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> gi(-3, 11);
    std::uniform_real_distribution<double> cont(-1, 10);
    int feasible = 0;
    for (int k = 0; k < 100; ++k) {
      // Mostly integral draws so that some points are feasible.
      std::vector<double> x = {double(gi(rng)), double(gi(rng) % 7),   double(gi(rng) & 1),
                               double(gi(rng) & 1), double(gi(rng) & 1), cont(rng),
                               0.0};
      x[6] = x[5] + x[0] - 4;
      if (k % 10 == 0) x[2] = 0.5;
      const bool expected = fixtures::dense_feasible(in, x);
      CHECK(check_feasibility(in, x).feasible == expected);
      feasible += expected;
    }
    CHECK(feasible > 0);
    CHECK(feasible < 100);
  }

  TEST_CASE("apply_variation") {
    const Instance base = fixtures::mixed();
    CHECK(apply_variation(base, {}) == base);

    VariationDelta d;
    d.mask = {Component::OBJ};
    std::vector<double> doubled;
    for (const Variable& v : base.variables) doubled.push_back(2 * v.objective);
    d.objective = doubled;
    const Instance out = apply_variation(base, d);
    CHECK(out.objective() == doubled);
    CHECK(out.rows == base.rows);
    for (std::size_t j = 0; j < base.num_variables(); ++j) {
      CHECK(out.variables[j].lower == base.variables[j].lower);
      CHECK(out.variables[j].upper == base.variables[j].upper);
    }
    const StructuralDiff diff = structural_diff(base, out);
    CHECK(diff.same_structure);
    CHECK(diff.changed == VariationMask{Component::OBJ});

    VariationDelta outside;
    outside.mask = {Component::OBJ};
    outside.rhs = std::vector<double>(base.num_rows(), 0.0);
    CHECK_THROWS_AS(apply_variation(base, outside), ContractViolation);
  }

  TEST_CASE("variation mask names") {
    const VariationMask m = VariationMask::from_names({"RHS", "LO"});
    CHECK(m.names() == std::vector<std::string>{"LO", "RHS"});
    CHECK(m.covers(VariationMask{Component::LO}));
    CHECK_FALSE(m.covers(VariationMask{Component::UP}));
    CHECK_THROWS_AS(VariationMask::from_names({"XYZ"}), InvalidInputError);
  }

  TEST_CASE("structural diff reports mismatches") {
    const Instance base = fixtures::mixed();
    Instance other = base;
    other.variables[0].name = "renamed";
    CHECK_FALSE(structural_diff(base, other).same_structure);
    other = base;
    other.rows.pop_back();
    CHECK_FALSE(structural_diff(base, other).same_structure);
  }

  TEST_CASE("validate rejects broken instances") {
    Instance in = fixtures::mixed();
    in.variables[0].lower = 20;
    CHECK_THROWS(validate(in));
    in = fixtures::mixed();
    in.rows[0].coefficients.push_back({99, 1});
    CHECK_THROWS(validate(in));
    in = fixtures::mixed();
    in.variables[1].name = in.variables[0].name;
    CHECK_THROWS(validate(in));
  }

  TEST_CASE("promote_unit_integers") {
    Instance in;
    in.variables = {{"a", VarKind::general_integer, 0, 1, 0}, {"b", VarKind::general_integer, 0, 2, 0}};
    const Instance out = promote_unit_integers(in);
    CHECK(out.variables[0].kind == VarKind::binary);
    CHECK(out.variables[1].kind == VarKind::general_integer);
  }

  TEST_CASE("solution file round trip") {
    const Instance in = fixtures::mixed();
    const Solution s{{1, 2, 0, 1, 0, 0.1, -3.25}};
    CHECK(parse_solution(format_solution(in, s), in) == s);
    CHECK_THROWS(parse_solution("g1 1\n", in));
    CHECK_THROWS(parse_solution(format_solution(in, s) + "zz 1\n", in));
  }
}
