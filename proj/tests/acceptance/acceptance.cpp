// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "reoptbench/error.hpp"
#include "reoptbench/harness.hpp"
#include "reoptbench/mps.hpp"
#include "reoptbench/oracle.hpp"
#include "reoptbench/reopt.hpp"
#include "reoptbench/score.hpp"
#include "reoptbench/simgen.hpp"

using namespace reoptbench;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) detail = what;
    ok = ok && condition;
  }
};

double seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

SolveOutcome outcome(double t, double limit, bool optimal, std::optional<double> pb,
                     std::optional<double> db) {
  SolveOutcome o;
  o.time_spent_seconds = t;
  o.time_limit_seconds = limit;
  o.solved_to_optimality = optimal;
  o.primal_bound = pb;
  o.dual_bound = db;
  o.has_feasible_solution = pb.has_value() && std::isfinite(*pb);
  return o;
}

// 1: f in [0,1] solved, (1,2] timeout with incumbent, 3 without; exact to 1e-12.
Check score_tiers() {
  Check c;
  const auto start = Clock::now();
  for (double t : {0.0, 1.0, 250.0, 599.0, 600.0}) {
    const double f = instance_score(outcome(t, 600, true, 7, 7)).f;
    c.require(f >= 0 && f <= 1 && std::abs(f - t / 600) <= 1e-12, "solved tier");
  }
  for (double db : {9.0, 5.0, 1e-3}) {
    const double f = instance_score(outcome(600, 600, false, 10, db)).f;
    c.require(f > 1 && f <= 2 && std::abs(f - (1 + (10 - db) / 10)) <= 1e-12, "incumbent tier");
  }
  const double f3 = instance_score(outcome(600, 600, false, std::nullopt, std::nullopt)).f;
  c.require(std::abs(f3 - 3) <= 1e-12, "no-incumbent tier");
  c.require(seconds(start) < 1.0, "runtime");
  return c;
}

// 2: continuity across the solved / unsolved boundary. The 1e-3 window is
// closed; 1e-12 absorbs the rounding of 0.999.
Check boundary() {
  Check c;
  constexpr double kWindow = 1e-3 + 1e-12;
  const double below = instance_score(outcome(0.999 * 600, 600, true, 4, 4)).f;
  c.require(below < 1 && 1 - below <= kWindow, "solved at 0.999 limit");
  const double above = instance_score(outcome(600, 600, false, 1.0, 1.0 - 1e-6)).f;
  c.require(above > 1 && above - 1 <= kWindow, "timeout at gap 1e-6");
  return c;
}

// 3: C = 177.5 for one team ranked first everywhere; weights 2 and 6.
Check final_arithmetic() {
  Check c;
  TeamSeriesScores t{"solo", 1, {}, {}};
  for (int i = 1; i <= 50; ++i) {
    t.records.push_back({1, i, 0.2, 0, 0, 0.2});
    t.valid.push_back(true);
  }
  const std::vector<TeamSeriesScores> all{t};
  c.require(final_score(build_rank_table(all)).C.at(0) == 177.5, "C == 177.5");
  c.require(instance_weight(10) == 2.0 && instance_weight(50) == 6.0, "weights");
  return c;
}

// 4: ties and the invalidity penalty.
Check ranking() {
  Check c;
  const std::vector<double> s{0.5, 0.5, 1.2};
  c.require(rank_instance(s, {true, true, true}) == std::vector<int>{1, 1, 3}, "ties");
  const std::vector<double> four{0.3, 0.1, 0.2, 0.05};
  c.require(rank_instance(four, {true, true, false, true}).at(2) == 8, "penalty rank");
  return c;
}

// 5: gap branches and scale invariance.
Check gap_table() {
  Check c;
  c.require(gap(0.0, 0.0) == 0.0, "0/0");
  c.require(gap(kInfinity, 1.0) == 1.0, "infinite");
  c.require(gap(-10.0, 5.0) == 1.0, "sign crossing");
  c.require(gap(10.0, 5.0) == 0.5, "(10,5)");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(-1e3, 1e3), s(1e-6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double pb = v(rng), db = v(rng), a = s(rng);
    c.require(std::abs(gap(a * pb, a * db) - gap(pb, db)) <= 1e-12, "scale invariance");
  }
  return c;
}

Instance integer_base() {
  Instance in;
  in.name = "base";
  Row cap{"cap", {}, -kInfinity, 60};
  Row cover{"cover", {}, 4, kInfinity};
  Row bal{"bal", {}, 10, 10};
  for (std::size_t j = 0; j < 12; ++j) {
    in.variables.push_back({"g" + std::to_string(j), VarKind::general_integer, 0,
                            static_cast<double>(3 + j % 5), 1.0 + 0.5 * j});
    cap.coefficients.push_back({j, 1.0 + j % 3});
  }
  for (std::size_t j = 12; j < 40; ++j) {
    in.variables.push_back({"b" + std::to_string(j), VarKind::binary, 0, 1, -1.0 + 0.1 * j});
    cover.coefficients.push_back({j, 1});
    if (j % 4 == 0) cap.coefficients.push_back({j, 2});
  }
  in.variables.push_back({"x", VarKind::continuous, 0, 20, 0.25});
  in.variables.push_back({"z", VarKind::continuous, -5, 50, -0.5});
  bal.coefficients = {{0, 1}, {40, 1}, {41, 1}};
  in.rows = {cap, cover, bal, {"neg", {{12, 1}, {41, 1}}, -kInfinity, -2.5}};
  return in;
}

// 6: each recipe, three seeds: 50 instances, same structure, diffs inside the mask.
Check structural_contract(std::vector<GeneratedSeries>& keep) {
  Check c;
  const Instance base = integer_base();
  for (Recipe r : {Recipe::bound_perturb, Recipe::binary_fix, Recipe::obj_perturb_rotate,
                   Recipe::rhs_convex, Recipe::side_perturb, Recipe::synthetic_semicontinuous}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto start = Clock::now();
      SeriesRequest req;
      req.spec.recipe = r;
      req.spec.seed = seed;
      if (r != Recipe::synthetic_semicontinuous) req.base = base;
      req.time_limit_seconds = 1;
      const GeneratedSeries s = generate_series(req);
      const std::string tag = std::string(to_string(r)) + " seed " + std::to_string(seed);
      c.require(s.instances.size() == 50, tag + ": count");
      for (const Instance& in : s.instances) {
        const StructuralDiff d = structural_diff(s.base, in);
        c.require(d.same_structure, tag + ": structure " + d.mismatch);
        c.require(s.manifest.variation_mask.covers(d.changed), tag + ": out-of-mask change");
        c.require(!d.objective_constant_changed, tag + ": objective constant");
      }
      c.require(seconds(start) < 60, tag + ": runtime");
      keep.push_back(s);
    }
  }
  return c;
}

// 7: regeneration is byte identical; parse(write) is field equal.
Check determinism(const std::vector<GeneratedSeries>& generated) {
  Check c;
  c.require(!generated.empty(), "no generated series to compare");
  if (generated.empty()) return c;
  const Instance base = integer_base();
  for (const GeneratedSeries& s : generated) {
    SeriesRequest req;
    req.spec.recipe = recipe_from_string(s.manifest.recipe);
    req.spec.seed = s.manifest.seed;
    if (req.spec.recipe != Recipe::synthetic_semicontinuous) req.base = base;
    req.time_limit_seconds = 1;
    const GeneratedSeries again = generate_series(req);
    for (std::size_t i = 0; i < s.instances.size(); ++i) {
      const std::string text = write_mps(s.instances[i]);
      c.require(text == write_mps(again.instances[i]), s.manifest.recipe + ": regeneration");
      c.require(bit_equal(parse_mps(text), s.instances[i]), s.manifest.recipe + ": round trip");
    }
  }
  const auto a = fixtures::temp_dir("acc-a"), b = fixtures::temp_dir("acc-b");
  write_series(generated.back(), a);
  write_series(generated.back(), b);
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    const auto other = b / entry.path().filename();
    c.require(std::filesystem::file_size(entry.path()) == std::filesystem::file_size(other),
              "written file sizes");
  }
  return c;
}

// 8: reopt with empty state equals the oracle; warm-started OBJ series stay valid.
Check oracle_equivalence() {
  Check c;
  std::mt19937_64 rng(8);
  OracleBackend backend;
  std::uniform_int_distribution<int> size(1, 12), rows(0, 4);
  for (int k = 0; k < 100; ++k) {
    const Sense sense = k % 2 ? Sense::maximize : Sense::minimize;
    const Instance in = k % 10 == 9 ? fixtures::infeasible_binary(size(rng))
                                    : fixtures::random_binary(rng, size(rng), rows(rng), sense);
    const ReoptResult r = solve_reopt({}, in, 60, backend);
    const OracleResult o = enumerate_solve(in, 60);
    c.require(r.status == o.status, "status");
    c.require(r.outcome.primal_bound == o.outcome.primal_bound, "optimum");
  }
  for (std::uint64_t seed : {1, 2, 3}) {
    Instance base = fixtures::random_binary(rng, 10, 3, seed == 2 ? Sense::maximize : Sense::minimize);
    GeneratorSpec spec;
    spec.recipe = Recipe::obj_perturb_rotate;
    spec.seed = seed;
    spec.candidate_count = 10;
    const auto series = generate_candidates(spec, &base);
    CarryState state;
    for (std::size_t i = 0; i < series.size(); ++i) {
      ReoptResult r = solve_reopt(state, series[i], 60, backend);
      if (i > 0) {
        c.require(r.warm_start.has_value(), "warm start for instance " + std::to_string(i + 1));
        if (r.warm_start) {
          const double eval = objective_value(series[i], r.warm_start->solution);
          c.require(std::abs(eval - r.warm_start->objective) <= 1e-9, "warm objective");
          c.require(check_feasibility(series[i], r.warm_start->solution).feasible, "warm feasible");
        }
      }
      c.require(r.solution && std::abs(objective_value(series[i], *r.solution) -
                                       *r.outcome.primal_bound) <= 1e-9,
                "incumbent objective");
      c.require(r.outcome.primal_bound == enumerate_solve(series[i], 60).outcome.primal_bound,
                "warm optimum equals cold optimum");
      state = std::move(r.state);
    }
  }
  return c;
}

bool mentions(const std::vector<std::string>& v, const std::string& text) {
  for (const std::string& s : v) {
    if (s.find(text) != std::string::npos) return true;
  }
  return false;
}

// 9: baseline conforms on a 50-instance series; mutations are named.
Check harness_conformance() {
  Check c;
  const auto start = Clock::now();
  const auto dir = fixtures::temp_dir("acc-harness");
  SeriesRequest req;
  req.spec.seed = 4;
  req.time_limit_seconds = 1;
  write_series(generate_series(req), dir / "series");
  const auto manifest = dir / "series" / "manifest.json";
  RunLimits limits;
  limits.per_instance_time_limit_seconds = 1;
  limits.total_budget_seconds = 50;
  const SeriesRunRecord rec = run_series({REOPTBENCH_BASELINE}, manifest, limits);
  c.require(rec.protocol_violations.empty(), "baseline violations");
  c.require(rec.results.size() == 50, "outcome count");
  for (const InstanceResult& r : rec.results) c.require(r.valid, "baseline result validity");

  auto mutate = [&](const std::string& name, const std::function<void(std::vector<RunEvent>&)>& f,
                    const std::string& expected) {
    std::vector<RunEvent> events = rec.events;
    f(events);
    for (std::size_t k = 0; k < events.size(); ++k) {
      events[k].timestamp_seconds = events[k].reported_seconds = 0.01 * (k + 1);
    }
    c.require(mentions(validate_event_log(events), expected), name);
  };
  mutate("reordered", [](auto& e) { std::swap(e[4], e[6]); }, "finalized out of order");
  mutate("duplicate finalization", [](auto& e) { e.insert(e.begin() + 15, e[14]); },
         "result modified after finalization (instance 7)");
  mutate("missing index", [](auto& e) { e.erase(e.begin() + 25, e.begin() + 27); },
         "instance 13 missing");
  c.require(seconds(start) < 300, "runtime");
  return c;
}

// 10: similarity fixtures and range.
Check similarity_range() {
  Check c;
  const std::vector<double> v{3, 4}, w{-3, -4};
  c.require(similarity(v, v) == 1.0, "identical");
  c.require(similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0, "orthogonal");
  c.require(similarity(v, w) == -1.0, "antipodal");
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1, 1), e(-30, 30);
  std::uniform_int_distribution<int> dim(1, 20);
  for (int k = 0; k < 10000; ++k) {
    const int n = dim(rng);
    std::vector<double> a(n), b(n);
    for (int j = 0; j < n; ++j) {
      a[j] = u(rng) * std::pow(10.0, e(rng));
      b[j] = k % 3 == 0 ? a[j] * 2.5 : u(rng) * std::pow(10.0, e(rng));
    }
    try {
      const double s = similarity(a, b);
      c.require(s >= -1 - 1e-12 && s <= 1 + 1e-12, "range");
    } catch (const UndefinedSimilarity&) {
    }
  }
  return c;
}

// 11: reltime = i/50 gives batch means 0.11 ... 0.91 exactly.
Check batches() {
  Check c;
  std::vector<ScoreRecord> recs;
  for (int i = 1; i <= 50; ++i) recs.push_back({1, i, i / 50.0, 0, 0, i / 50.0});
  const BatchReport r = batch_report(recs);
  const double expected[] = {0.11, 0.31, 0.51, 0.71, 0.91};
  for (int b = 0; b < 5; ++b) c.require(r.batches[b].reltime == expected[b], "batch mean");
  c.require(r.overall.reltime == 0.51, "overall mean");
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int number, const char* name, const std::function<Check()>& run) {
    const auto start = Clock::now();
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2d %-34s %.3fs%s%s\n", c.ok ? "PASS" : "FAIL", number, name, seconds(start),
                c.ok ? "" : "  ", c.detail.c_str());
    std::fflush(stdout);
    failures += !c.ok;
  };
  std::vector<GeneratedSeries> generated;
  report(1, "score tiers", score_tiers);
  report(2, "boundary continuity", boundary);
  report(3, "final score arithmetic", final_arithmetic);
  report(4, "ranking rules", ranking);
  report(5, "gap table and scale invariance", gap_table);
  report(6, "series structural contract", [&] { return structural_contract(generated); });
  report(7, "determinism and round trip", [&] { return determinism(generated); });
  report(8, "oracle equivalence", oracle_equivalence);
  report(9, "harness protocol conformance", harness_conformance);
  report(10, "similarity fixtures and range", similarity_range);
  report(11, "batch reporting", batches);
  return failures == 0 ? 0 : 1;
}
