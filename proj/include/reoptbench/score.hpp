#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reoptbench/model.hpp"

namespace reoptbench {

enum class SolveStatus { optimal, timeout_incumbent, timeout_nofeas, error };

std::string_view to_string(SolveStatus status);
/// Throws InvalidInputError for unknown names.
SolveStatus solve_status_from_string(std::string_view name);

/// What a solver achieved on one instance. An absent bound means the solver
/// reported none; infinite bounds are allowed.
struct SolveOutcome {
  double time_spent_seconds = 0.0;
  double time_limit_seconds = 1.0;
  bool solved_to_optimality = false;
  std::optional<double> primal_bound;
  std::optional<double> dual_bound;
  bool has_feasible_solution = false;
  bool stopped_early_without_zero_gap = false;

  bool operator==(const SolveOutcome&) const = default;
};

/// Throws InvalidInputError when the outcome breaks its invariants.
void validate(const SolveOutcome& outcome);

struct ScoreRecord {
  int series = 0;
  int instance = 0;
  double reltime = 0.0;
  double gap = 0.0;
  int nofeas = 0;
  double f = 0.0;

  bool operator==(const ScoreRecord&) const = default;
};

/// A claimed optimal result must close the gap to within this value.
inline constexpr double kOptimalityGapTolerance = 1e-6;
/// A dual bound crossing the primal bound by more than this (scaled by
/// max(1, |pb|)) invalidates the result.
inline constexpr double kDualBoundTolerance = 1e-6;

double reltime(const SolveOutcome& outcome);

/// Normalized primal-dual gap. Absent bounds count as infinite.
double gap(std::optional<double> primal_bound, std::optional<double> dual_bound);

/// Downgrades a claimed optimal outcome whose gap exceeds the optimality
/// tolerance to an unsolved one.
SolveOutcome audit(const SolveOutcome& outcome);

/// f = reltime + gap + nofeas on the audited outcome.
ScoreRecord instance_score(const SolveOutcome& outcome, int series = 1, int instance = 1);

bool dual_bound_crosses(std::optional<double> primal_bound, std::optional<double> dual_bound,
                        Sense sense);

/// Standard competition ranking of valid teams by ascending f; invalid teams
/// get twice the team count.
std::vector<int> rank_instance(std::span<const double> scores, const std::vector<bool>& validity);

/// Weight of instance i (1-based) in the final score.
double instance_weight(int instance);

/// Ranks for every (series, instance) pair, one entry per team.
struct RankTable {
  std::vector<std::string> teams;
  int series_count = 0;
  int instance_count = 50;
  std::map<std::pair<int, int>, std::vector<int>> ranks;
  std::map<std::pair<int, int>, std::vector<bool>> validity;
};

/// Scores of one team on one series, indexed by instance.
struct TeamSeriesScores {
  std::string team;
  int series = 1;
  std::vector<ScoreRecord> records;
  std::vector<bool> valid;
};

/// Groups scores by (series, instance) and ranks every group.
RankTable build_rank_table(std::span<const TeamSeriesScores> scores, int instance_count = 50);

struct FinalScore {
  std::vector<std::string> teams;
  std::vector<double> C;
};

/// Throws IncompleteData if any (series, instance) entry is missing.
FinalScore final_score(const RankTable& table);

struct BatchMeans {
  double reltime = 0.0;
  double gap = 0.0;
  double nofeas = 0.0;
  double f = 0.0;
};

struct BatchReport {
  BatchMeans overall;
  std::array<BatchMeans, 5> batches;  // instances 1-10, 11-20, ..., 41-50
};

/// Requires records for instances 1..50 of one team and series, each once.
BatchReport batch_report(std::span<const ScoreRecord> records);

/// Per-instance rows for the CSV report.
struct ScoreRow {
  std::string series;
  ScoreRecord record;
  std::string team;
  int rank = 0;
};

/// Columns: series,instance,team,reltime,gap,nofeas,f,rank
std::string scores_csv(std::span<const ScoreRow> rows);

struct SummaryRow {
  std::string team;
  std::string series;
  BatchReport report;
};

/// Columns: team,series,batch,reltime,gap,nofeas,f with batch in
/// {all, 1-10, 11-20, 21-30, 31-40, 41-50}.
std::string summary_csv(std::span<const SummaryRow> rows);

/// Columns: team,C
std::string final_csv(const FinalScore& score);

}  // namespace reoptbench
