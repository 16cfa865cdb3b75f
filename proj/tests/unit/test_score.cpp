#include <cmath>
#include <random>

#include "doctest.h"
#include "reoptbench/error.hpp"
#include "reoptbench/score.hpp"

using namespace reoptbench;

namespace {

SolveOutcome solved(double t, double limit) {
  SolveOutcome o;
  o.time_spent_seconds = t;
  o.time_limit_seconds = limit;
  o.solved_to_optimality = true;
  o.primal_bound = 5;
  o.dual_bound = 5;
  o.has_feasible_solution = true;
  return o;
}

SolveOutcome unsolved(double t, double limit, std::optional<double> pb, std::optional<double> db) {
  SolveOutcome o;
  o.time_spent_seconds = t;
  o.time_limit_seconds = limit;
  o.primal_bound = pb;
  o.dual_bound = db;
  o.has_feasible_solution = pb.has_value();
  return o;
}

std::vector<ScoreRecord> arithmetic_records() {
  std::vector<ScoreRecord> records;
  for (int i = 1; i <= 50; ++i) {
    ScoreRecord r;
    r.instance = i;
    r.reltime = i / 50.0;
    r.f = r.reltime;
    records.push_back(r);
  }
  return records;
}

}  // namespace

TEST_SUITE("score") {
  TEST_CASE("reltime") {
    CHECK(reltime(solved(300, 600)) == 0.5);
    CHECK(reltime(unsolved(590, 600, 1, 0)) == 1.0);
    CHECK(reltime(unsolved(660, 600, 1, 0)) == doctest::Approx(1.1).epsilon(1e-15));
    SolveOutcome early = unsolved(10, 600, std::nullopt, std::nullopt);
    early.stopped_early_without_zero_gap = true;
    CHECK(reltime(early) == 1.0);
  }

  TEST_CASE("gap branches") {
    CHECK(gap(0.0, 0.0) == 0.0);
    CHECK(gap(kInfinity, 3.0) == 1.0);
    CHECK(gap(std::nullopt, 3.0) == 1.0);
    CHECK(gap(3.0, -kInfinity) == 1.0);
    CHECK(gap(10.0, 5.0) == 0.5);
    CHECK(gap(-10.0, 5.0) == 1.0);
    CHECK(gap(0.0, 5.0) == 1.0);
    CHECK(gap(-4.0, -4.0) == 0.0);
  }

  TEST_CASE("gap is scale invariant") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> value(-100, 100), scale(1e-3, 1e3);
    for (int k = 0; k < 1000; ++k) {
      const double pb = value(rng), db = value(rng), s = scale(rng);
      CHECK(std::abs(gap(s * pb, s * db) - gap(pb, db)) <= 1e-12);
    }
  }

  TEST_CASE("instance score tiers") {
    CHECK(instance_score(solved(0, 600)).f == 0.0);
    const ScoreRecord none = instance_score(unsolved(600, 600, std::nullopt, std::nullopt));
    CHECK(none.f == 3.0);
    CHECK(none.nofeas == 1);
    const ScoreRecord inc = instance_score(unsolved(600, 600, 11.0, 10.0));
    CHECK(inc.f == doctest::Approx(1.0 + 1.0 / 11.0).epsilon(1e-15));
    CHECK(inc.nofeas == 0);
  }

  TEST_CASE("audit downgrades a false optimality claim") {
    SolveOutcome o = solved(10, 100);
    o.dual_bound = 4;
    const SolveOutcome a = audit(o);
    CHECK_FALSE(a.solved_to_optimality);
    CHECK(a.stopped_early_without_zero_gap);
    CHECK(instance_score(o).f == doctest::Approx(1.0 + 0.2));
  }

  TEST_CASE("dual bound crossing") {
    CHECK(dual_bound_crosses(10.0, 11.0, Sense::minimize));
    CHECK_FALSE(dual_bound_crosses(10.0, 10.0 + 1e-7, Sense::minimize));
    CHECK_FALSE(dual_bound_crosses(10.0, 9.0, Sense::minimize));
    CHECK(dual_bound_crosses(10.0, 9.0, Sense::maximize));
    CHECK_FALSE(dual_bound_crosses(std::nullopt, 9.0, Sense::maximize));
  }

  TEST_CASE("ranking") {
    const std::vector<double> s{0.5, 0.5, 1.2};
    CHECK(rank_instance(s, {true, true, true}) == std::vector<int>{1, 1, 3});
    const std::vector<double> four{0.1, 0.2, 0.3, 0.0};
    CHECK(rank_instance(four, {true, true, true, false}) == std::vector<int>{1, 2, 3, 8});
    const std::vector<double> one{2.7};
    CHECK(rank_instance(one, {true}) == std::vector<int>{1});
  }

  TEST_CASE("ranks depend only on order") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> value(0, 6);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> s(6), t(6);
      std::vector<bool> valid(6);
      for (int j = 0; j < 6; ++j) {
        s[j] = value(rng) * 0.25;
        t[j] = std::exp(3 * s[j]) + 7;
        valid[j] = value(rng) != 0;
      }
      CHECK(rank_instance(s, valid) == rank_instance(t, valid));
    }
  }

  TEST_CASE("weights and final score") {
    CHECK(instance_weight(10) == 2.0);
    CHECK(instance_weight(50) == 6.0);

    auto team = [](const std::string& name, double f) {
      TeamSeriesScores t{name, 1, {}, {}};
      for (int i = 1; i <= 50; ++i) {
        t.records.push_back({1, i, f, 0, 0, f});
        t.valid.push_back(true);
      }
      return t;
    };
    const std::vector<TeamSeriesScores> single{team("a", 0.3)};
    CHECK(final_score(build_rank_table(single)).C == std::vector<double>{177.5});

    const std::vector<TeamSeriesScores> two{team("a", 0.1), team("b", 0.9)};
    const FinalScore fs = final_score(build_rank_table(two));
    CHECK(fs.C[0] == 177.5);
    CHECK(fs.C[1] == 2 * fs.C[0]);

    const std::vector<TeamSeriesScores> tied{team("a", 0.4), team("b", 0.4)};
    const FinalScore ts = final_score(build_rank_table(tied));
    CHECK(ts.C[0] == ts.C[1]);
  }

  TEST_CASE("improving one rank lowers C") {
    RankTable t;
    t.teams = {"a"};
    t.series_count = 1;
    t.instance_count = 50;
    for (int i = 1; i <= 50; ++i) t.ranks[{1, i}] = {3};
    const double before = final_score(t).C[0];
    t.ranks[{1, 17}] = {2};
    CHECK(final_score(t).C[0] < before);
    t.ranks.erase({1, 4});
    CHECK_THROWS_AS(final_score(t), IncompleteData);
  }

  TEST_CASE("batch means") {
    const auto records = arithmetic_records();
    const BatchReport r = batch_report(records);
    CHECK(r.overall.reltime == 0.51);
    CHECK(r.batches[0].reltime == 0.11);
    CHECK(r.batches[1].reltime == 0.31);
    CHECK(r.batches[2].reltime == 0.51);
    CHECK(r.batches[3].reltime == 0.71);
    CHECK(r.batches[4].reltime == 0.91);

    std::vector<ScoreRecord> flat = records;
    for (ScoreRecord& s : flat) s.f = 1.7;
    const BatchReport c = batch_report(flat);
    for (const BatchMeans& b : c.batches) CHECK(b.f == c.overall.f);

    std::vector<ScoreRecord> missing(records.begin(), records.end() - 1);
    CHECK_THROWS_AS(batch_report(missing), IncompleteData);
  }

  TEST_CASE("batch means match per-batch summation") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0, 3);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<ScoreRecord> recs;
      for (int i = 1; i <= 50; ++i) recs.push_back({1, i, u(rng), u(rng) / 3, i % 3 == 0, u(rng)});
      std::shuffle(recs.begin(), recs.end(), rng);
      const BatchReport r = batch_report(recs);
      for (int b = 0; b < 5; ++b) {
        double sum = 0;
        for (const ScoreRecord& s : recs) {
          if ((s.instance - 1) / 10 == b) sum += s.f;
        }
        CHECK(r.batches[b].f == doctest::Approx(sum / 10).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("csv layouts") {
    const std::vector<ScoreRow> rows{{"s1", {1, 3, 0.5, 0, 0, 0.5}, "t", 1}};
    const std::string csv = scores_csv(rows);
    CHECK(csv.rfind("series,instance,team,reltime,gap,nofeas,f,rank\n", 0) == 0);
    CHECK(csv.find("s1,3,t,0.5,0,0,0.5,1") != std::string::npos);
    const std::string fc = final_csv({{"t"}, {177.5}});
    CHECK(fc == "team,C\nt,177.5\n");
  }

  TEST_CASE("status names") {
    for (SolveStatus s : {SolveStatus::optimal, SolveStatus::timeout_incumbent,
                          SolveStatus::timeout_nofeas, SolveStatus::error}) {
      CHECK(solve_status_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(solve_status_from_string("done"), InvalidInputError);
  }
}
