// reoptbench: generate series, supervise solver runs, check and score them.
//
// Exit codes: 0 success, 1 usage error, 2 invalid data or failed check,
// 3 I/O failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reoptbench/error.hpp"
#include "reoptbench/harness.hpp"
#include "reoptbench/manifest.hpp"
#include "reoptbench/mps.hpp"
#include "reoptbench/oracle.hpp"
#include "reoptbench/score.hpp"
#include "reoptbench/simgen.hpp"
#include "reoptbench/solution_file.hpp"

namespace rb = reoptbench;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;

struct BandOption {
  std::vector<double> values;

  rb::Band band(const rb::Band& fallback) const {
    if (values.empty()) return fallback;
    return {values.at(0), values.at(1)};
  }
};

std::string format_optional(const std::optional<double>& value) {
  if (!value) return "-";
  if (std::isinf(*value)) return *value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", *value);
  return buffer;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw rb::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw rb::IoError("failed writing " + path.string());
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string recipe = "synthetic_semicontinuous";
  std::string base;
  std::uint64_t seed = 0;
  std::string out;
  std::string series_name = "series";
  std::optional<double> time_limit;
  std::uint64_t candidates = rb::kSeriesLength;
  BandOption time_band;
  BandOption similarity_band;
  bool measure = false;
  double measure_limit = 60.0;
  rb::RecipeParameters parameters;
};

int run_generate(const GenerateArgs& a) {
  rb::SeriesRequest request;
  request.spec.recipe = rb::recipe_from_string(a.recipe);
  request.spec.seed = a.seed;
  request.spec.candidate_count = a.candidates;
  request.spec.parameters = a.parameters;
  if (!a.base.empty()) {
    request.base = rb::promote_unit_integers(rb::read_mps_file(a.base));
    request.base_name = std::filesystem::path(a.base).filename().string();
  }
  request.series_name = a.series_name;
  request.time_band = a.time_band.band(rb::kAnyTime);
  request.similarity_band = a.similarity_band.band(rb::kAnySimilarity);
  request.time_limit_seconds = a.time_limit;
  if (a.measure) {
    const double limit = a.measure_limit;
    request.timer = [limit](const rb::Instance& instance) -> std::optional<double> {
      try {
        const rb::OracleResult r = rb::enumerate_solve(instance, limit);
        if (r.status != rb::SolveStatus::optimal) return std::nullopt;
        return r.outcome.time_spent_seconds;
      } catch (const rb::CapabilityError&) {
        return std::nullopt;
      }
    };
  }
  const rb::GeneratedSeries series = rb::generate_series(request);
  rb::write_series(series, a.out);
  std::cout << "wrote " << series.instances.size() << " instances and manifest.json to "
            << a.out << "\n";
  return 0;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string manifest;
  std::string out;
  std::optional<double> time_limit;
  std::optional<double> budget;
  double memory_gib = 16.0;
  std::string solution_dir;
  std::string work_dir;
  std::vector<std::string> solver;
};

int run_run(const RunArgs& a) {
  const rb::SeriesManifest manifest = rb::load_manifest(a.manifest);
  rb::RunLimits limits = rb::RunLimits::for_manifest(manifest);
  if (a.time_limit) {
    limits.per_instance_time_limit_seconds = *a.time_limit;
    limits.total_budget_seconds =
        static_cast<double>(manifest.instance_files.size()) * *a.time_limit;
  }
  if (a.budget) limits.total_budget_seconds = *a.budget;
  limits.memory_limit_bytes = static_cast<std::uint64_t>(a.memory_gib * 1024.0 * 1024.0 * 1024.0);
  rb::RunOptions options;
  options.solution_dir = a.solution_dir;
  options.work_dir = a.work_dir;
  const rb::SeriesRunRecord record = rb::run_series(a.solver, a.manifest, limits, options);
  rb::persist_run(record, a.out);
  std::size_t finished = 0;
  for (const rb::InstanceResult& r : record.results) {
    if (r.status == rb::SolveStatus::optimal) ++finished;
  }
  std::cout << record.series_name << ": " << finished << "/" << record.results.size()
            << " solved to optimality, " << record.protocol_violations.size()
            << " protocol violations\n";
  for (const std::string& v : record.protocol_violations) std::cout << "  violation: " << v << "\n";
  if (record.rejected) std::cout << "run rejected: event ordering or finality violated\n";
  return record.protocol_violations.empty() ? 0 : 2;
}

// --- check -----------------------------------------------------------------

struct CheckArgs {
  std::string instance;
  std::string solution;
  std::string manifest;
};

int check_solution(const CheckArgs& a) {
  const rb::Instance instance = rb::promote_unit_integers(rb::read_mps_file(a.instance));
  const rb::Solution solution = rb::read_solution_file(a.solution, instance);
  const rb::FeasReport report = rb::check_feasibility(instance, solution);
  std::printf("objective %.17g\n", rb::objective_value(instance, solution));
  std::printf("max bound violation %.3g\nmax row violation %.3g\nmax integrality violation %.3g\n",
              report.max_bound_violation, report.max_row_violation,
              report.max_integrality_violation);
  if (!report.feasible) {
    std::printf("infeasible, worst offender %s\n", report.worst_offender.c_str());
    return kExitDomain;
  }
  std::printf("feasible\n");
  return 0;
}

int check_manifest(const CheckArgs& a) {
  const rb::SeriesManifest manifest = rb::load_manifest(a.manifest);
  rb::validate(manifest);
  const rb::Instance first = rb::read_mps_file(manifest.instance_path(1));
  int status = 0;
  for (std::size_t i = 2; i <= manifest.instance_files.size(); ++i) {
    const rb::Instance other = rb::read_mps_file(manifest.instance_path(i));
    const rb::StructuralDiff diff = rb::structural_diff(first, other);
    if (!diff.same_structure) {
      std::printf("instance %zu: structure differs: %s\n", i, diff.mismatch.c_str());
      status = kExitDomain;
    } else if (!manifest.variation_mask.covers(diff.changed)) {
      std::printf("instance %zu: changes %s outside the mask %s\n", i,
                  diff.changed.to_string().c_str(), manifest.variation_mask.to_string().c_str());
      status = kExitDomain;
    }
  }
  if (status == 0) {
    std::printf("%zu instances share one structure; variation within %s\n",
                manifest.instance_files.size(), manifest.variation_mask.to_string().c_str());
  }
  return status;
}

// --- solve (also usable as an external backend) ----------------------------

struct SolveArgs {
  std::string instance;
  double time_limit = 60.0;
  std::string warm_start;
  std::optional<double> cutoff;
  std::string solution;
};

int run_solve(const SolveArgs& a) {
  const rb::Instance instance = rb::promote_unit_integers(rb::read_mps_file(a.instance));
  rb::EnumerationOptions options;
  if (!a.warm_start.empty()) options.warm_start = rb::read_solution_file(a.warm_start, instance);
  options.cutoff = a.cutoff;
  const rb::OracleResult r = rb::enumerate_solve(instance, a.time_limit, options);
  if (r.solution && !a.solution.empty()) rb::write_solution_file(a.solution, instance, *r.solution);
  std::cout << "RESULT " << rb::to_string(r.status) << " "
            << format_optional(r.outcome.primal_bound) << " "
            << format_optional(r.outcome.dual_bound) << std::endl;
  return 0;
}

// --- score / report --------------------------------------------------------

struct ScoreArgs {
  std::vector<std::string> runs;  // TEAM=PATH
  std::string out_dir = ".";
};

int run_score(const ScoreArgs& a) {
  struct Loaded {
    std::string team;
    rb::SeriesRunRecord record;
  };
  std::vector<Loaded> loaded;
  std::set<std::string> series_names;
  for (const std::string& spec : a.runs) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw rb::InvalidInputError("--run expects TEAM=PATH, got '" + spec + "'");
    }
    Loaded l{spec.substr(0, eq), rb::load_run(spec.substr(eq + 1))};
    series_names.insert(l.record.series_name);
    loaded.push_back(std::move(l));
  }
  std::map<std::string, int> series_index;
  for (const std::string& name : series_names) {
    series_index.emplace(name, static_cast<int>(series_index.size()) + 1);
  }

  std::vector<rb::TeamSeriesScores> all;
  std::vector<rb::SummaryRow> summary;
  for (const Loaded& l : loaded) {
    const int s = series_index.at(l.record.series_name);
    const rb::RunScores scores = rb::score_run(l.record, s);
    all.push_back({l.team, s, scores.records, scores.valid});
    if (scores.records.size() == rb::kSeriesLength) {
      summary.push_back({l.team, l.record.series_name, rb::batch_report(scores.records)});
    }
  }
  const int instance_count =
      loaded.empty() ? 0 : static_cast<int>(loaded.front().record.results.size());
  const rb::RankTable table = rb::build_rank_table(all, instance_count);

  std::vector<rb::ScoreRow> rows;
  for (const rb::TeamSeriesScores& t : all) {
    const auto team = static_cast<std::size_t>(
        std::find(table.teams.begin(), table.teams.end(), t.team) - table.teams.begin());
    for (const rb::ScoreRecord& r : t.records) {
      int rank = 0;
      if (auto it = table.ranks.find({t.series, r.instance}); it != table.ranks.end()) {
        rank = it->second[team];
      }
      std::string name;
      for (const auto& [n, idx] : series_index) {
        if (idx == t.series) name = n;
      }
      rows.push_back({name, r, t.team, rank});
    }
  }
  const std::filesystem::path dir = a.out_dir;
  std::filesystem::create_directories(dir);
  write_text(dir / "scores.csv", rb::scores_csv(rows));
  write_text(dir / "summary.csv", rb::summary_csv(summary));
  const rb::FinalScore final_score = rb::final_score(table);
  write_text(dir / "final.csv", rb::final_csv(final_score));
  std::cout << rb::final_csv(final_score);
  return 0;
}

struct ReportArgs {
  std::string run;
};

int run_report(const ReportArgs& a) {
  const rb::SeriesRunRecord record = rb::load_run(a.run);
  const rb::RunScores scores = rb::score_run(record);
  std::printf("series %s, %zu instances, time limit %g s\n", record.series_name.c_str(),
              record.results.size(), record.limits.per_instance_time_limit_seconds);
  std::printf("%-6s %-18s %12s %12s %6s %10s %s\n", "inst", "status", "reltime", "gap", "nofeas",
              "f", "valid");
  for (std::size_t k = 0; k < record.results.size(); ++k) {
    const rb::InstanceResult& r = record.results[k];
    const rb::ScoreRecord& s = scores.records[k];
    std::printf("%-6zu %-18s %12.6f %12.6g %6d %10.6f %s\n", r.index,
                std::string(rb::to_string(r.status)).c_str(), s.reltime, s.gap, s.nofeas, s.f,
                r.valid ? "yes" : ("no: " + r.note).c_str());
  }
  if (scores.records.size() == rb::kSeriesLength) {
    const rb::BatchReport report = rb::batch_report(scores.records);
    static constexpr const char* kNames[] = {"1-10", "11-20", "21-30", "31-40", "41-50"};
    std::printf("\n%-8s %12s %12s %12s %12s\n", "batch", "reltime", "gap", "nofeas", "f");
    auto line = [](const char* name, const rb::BatchMeans& m) {
      std::printf("%-8s %12.6f %12.6f %12.6f %12.6f\n", name, m.reltime, m.gap, m.nofeas, m.f);
    };
    line("all", report.overall);
    for (std::size_t b = 0; b < report.batches.size(); ++b) line(kNames[b], report.batches[b]);
  }
  for (const std::string& v : record.protocol_violations) std::printf("violation: %s\n", v.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark tooling for series of related MILP instances"};
  app.set_config("--config", "", "TOML or INI file with option values; flags override it");
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Generate an instance series");
  generate->add_option("--recipe", gen.recipe, "Generator recipe")
      ->check(CLI::IsMember({"bound_perturb", "binary_fix", "obj_perturb_rotate", "rhs_convex",
                             "side_perturb", "synthetic_semicontinuous"}));
  generate->add_option("--base", gen.base, "Base instance (MPS); not used by the synthetic recipe");
  generate->add_option("--seed", gen.seed, "Series seed");
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--series-name", gen.series_name, "Series name");
  generate->add_option("--time-limit", gen.time_limit, "Per-instance time limit in seconds");
  generate->add_option("--candidates", gen.candidates, "Number of candidates to generate");
  generate->add_option("--time-band", gen.time_band.values, "Accepted solve times LOW HIGH")
      ->expected(2);
  generate->add_option("--similarity-band", gen.similarity_band.values,
                       "Accepted similarities LOW HIGH")
      ->expected(2);
  generate->add_flag("--measure", gen.measure, "Time each candidate with the enumeration oracle");
  generate->add_option("--measure-limit", gen.measure_limit, "Time limit for --measure");
  generate->add_option("--max-relative-change", gen.parameters.max_relative_change);
  generate->add_option("--fraction-low", gen.parameters.fraction_low);
  generate->add_option("--fraction-high", gen.parameters.fraction_high);
  generate->add_option("--relative-noise", gen.parameters.relative_noise);
  generate->add_option("--rotation-pairs", gen.parameters.rotation_pairs);
  generate->add_option("--max-angle", gen.parameters.max_angle_radians);
  generate->add_option("--side-relative-change", gen.parameters.side_relative_change);
  generate->add_option("--rhs-spread", gen.parameters.rhs_spread);
  generate->add_option("--synthetic-variables", gen.parameters.synthetic_variables);
  generate->add_option("--synthetic-rows", gen.parameters.synthetic_rows);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a solver on a series under the harness");
  run_cmd->add_option("--manifest", run.manifest, "Series manifest")->required();
  run_cmd->add_option("--out", run.out, "Run record to write (JSON lines)")->required();
  run_cmd->add_option("--time-limit", run.time_limit, "Override the per-instance time limit");
  run_cmd->add_option("--budget", run.budget, "Total wall clock budget in seconds");
  run_cmd->add_option("--memory-gib", run.memory_gib, "Address space limit in GiB");
  run_cmd->add_option("--solution-dir", run.solution_dir, "Directory for solver solutions");
  run_cmd->add_option("--work-dir", run.work_dir, "Scratch directory");
  run_cmd->add_option("solver", run.solver, "Solver command, after --")->required();

  CheckArgs check;
  CLI::App* check_cmd =
      app.add_subcommand("check", "Check a solution against an instance, or a whole series");
  auto* inst_opt = check_cmd->add_option("--instance", check.instance, "Instance (MPS)");
  auto* sol_opt = check_cmd->add_option("--solution", check.solution, "Solution file");
  auto* man_opt = check_cmd->add_option("--manifest", check.manifest, "Series manifest");
  inst_opt->needs(sol_opt);
  sol_opt->needs(inst_opt);
  man_opt->excludes(inst_opt);

  ScoreArgs score;
  CLI::App* score_cmd = app.add_subcommand("score", "Rank teams and compute final scores");
  score_cmd->add_option("--run", score.runs, "TEAM=PATH of a run record (repeatable)")
      ->required();
  score_cmd->add_option("--out-dir", score.out_dir, "Directory for the CSV reports");

  ReportArgs report;
  CLI::App* report_cmd = app.add_subcommand("report", "Per-instance and per-batch table of a run");
  report_cmd->add_option("--run", report.run, "Run record")->required();

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one small instance by enumeration");
  solve_cmd->add_option("--instance", solve.instance, "Instance (MPS)")->required();
  solve_cmd->add_option("--time-limit", solve.time_limit, "Time limit in seconds");
  solve_cmd->add_option("--warm-start", solve.warm_start, "Warm start solution file");
  solve_cmd->add_option("--cutoff", solve.cutoff, "Only accept strictly better objectives");
  solve_cmd->add_option("--solution", solve.solution, "Where to write the solution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*run_cmd) return run_run(run);
    if (*check_cmd) {
      if (!check.manifest.empty()) return check_manifest(check);
      if (check.instance.empty()) {
        std::cerr << "check needs --instance and --solution, or --manifest\n";
        return kExitUsage;
      }
      return check_solution(check);
    }
    if (*score_cmd) return run_score(score);
    if (*report_cmd) return run_report(report);
    if (*solve_cmd) return run_solve(solve);
  } catch (const rb::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const rb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
