#include "reoptbench/score.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "reoptbench/error.hpp"

namespace reoptbench {

namespace {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

// Means over a block of records, accumulated in extended precision so that
// sums of short decimal fractions round back to the expected value.
BatchMeans mean_of(std::span<const ScoreRecord> records) {
  long double reltime = 0, gap = 0, nofeas = 0, f = 0;
  for (const ScoreRecord& r : records) {
    reltime += r.reltime;
    gap += r.gap;
    nofeas += r.nofeas;
    f += r.f;
  }
  const auto n = static_cast<long double>(records.size());
  return {static_cast<double>(reltime / n), static_cast<double>(gap / n),
          static_cast<double>(nofeas / n), static_cast<double>(f / n)};
}

constexpr int kBatchedSeriesLength = 50;

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::timeout_incumbent: return "timeout_incumbent";
    case SolveStatus::timeout_nofeas: return "timeout_nofeas";
    case SolveStatus::error: return "error";
  }
  return "error";
}

SolveStatus solve_status_from_string(std::string_view name) {
  for (SolveStatus s : {SolveStatus::optimal, SolveStatus::timeout_incumbent,
                        SolveStatus::timeout_nofeas, SolveStatus::error}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidInputError("unknown solve status '" + std::string(name) + "'");
}

void validate(const SolveOutcome& outcome) {
  if (!std::isfinite(outcome.time_spent_seconds) || outcome.time_spent_seconds < 0) {
    throw InvalidInputError("time spent must be finite and non-negative");
  }
  if (!std::isfinite(outcome.time_limit_seconds) || outcome.time_limit_seconds <= 0) {
    throw InvalidInputError("time limit must be finite and positive");
  }
  if (outcome.primal_bound && std::isnan(*outcome.primal_bound)) {
    throw InvalidInputError("primal bound is NaN");
  }
  if (outcome.dual_bound && std::isnan(*outcome.dual_bound)) {
    throw InvalidInputError("dual bound is NaN");
  }
  if (outcome.solved_to_optimality && !outcome.has_feasible_solution) {
    throw InvalidInputError("solved outcome without a feasible solution");
  }
  if (!outcome.primal_bound && outcome.has_feasible_solution) {
    throw InvalidInputError("feasible solution reported without a primal bound");
  }
}

double reltime(const SolveOutcome& outcome) {
  const double ratio = outcome.time_spent_seconds / outcome.time_limit_seconds;
  if (outcome.solved_to_optimality) return ratio;
  if (outcome.stopped_early_without_zero_gap) return 1.0;
  return std::max(1.0, ratio);
}

double gap(std::optional<double> primal_bound, std::optional<double> dual_bound) {
  if (!primal_bound || !dual_bound) return 1.0;
  const double pb = *primal_bound;
  const double db = *dual_bound;
  if (std::isnan(pb) || std::isnan(db)) return 1.0;
  if (pb == 0.0 && db == 0.0) return 0.0;
  if (std::isinf(pb) || std::isinf(db)) return 1.0;
  if ((pb < 0 && db > 0) || (pb > 0 && db < 0)) return 1.0;
  return std::abs(pb - db) / std::max(std::abs(pb), std::abs(db));
}

SolveOutcome audit(const SolveOutcome& outcome) {
  SolveOutcome audited = outcome;
  if (outcome.solved_to_optimality &&
      gap(outcome.primal_bound, outcome.dual_bound) > kOptimalityGapTolerance) {
    audited.solved_to_optimality = false;
    audited.stopped_early_without_zero_gap =
        outcome.time_spent_seconds < outcome.time_limit_seconds;
  }
  return audited;
}

ScoreRecord instance_score(const SolveOutcome& outcome, int series, int instance) {
  validate(outcome);
  const SolveOutcome audited = audit(outcome);
  ScoreRecord record;
  record.series = series;
  record.instance = instance;
  record.reltime = reltime(audited);
  record.gap = audited.solved_to_optimality ? 0.0 : gap(audited.primal_bound, audited.dual_bound);
  record.nofeas = audited.has_feasible_solution ? 0 : 1;
  record.f = record.reltime + record.gap + record.nofeas;
  return record;
}

bool dual_bound_crosses(std::optional<double> primal_bound, std::optional<double> dual_bound,
                        Sense sense) {
  if (!primal_bound || !dual_bound) return false;
  const double pb = *primal_bound;
  const double db = *dual_bound;
  if (!std::isfinite(pb) || std::isnan(db)) return false;
  const double slack = kDualBoundTolerance * std::max(1.0, std::abs(pb));
  return sense == Sense::minimize ? db > pb + slack : db < pb - slack;
}

std::vector<int> rank_instance(std::span<const double> scores, const std::vector<bool>& validity) {
  if (scores.size() != validity.size()) {
    throw StructuralError("scores and validity flags differ in length");
  }
  const int teams = static_cast<int>(scores.size());
  std::vector<int> ranks(scores.size());
  for (std::size_t a = 0; a < scores.size(); ++a) {
    if (!validity[a]) {
      ranks[a] = 2 * teams;
      continue;
    }
    int better = 0;
    for (std::size_t b = 0; b < scores.size(); ++b) {
      if (validity[b] && scores[b] < scores[a]) ++better;
    }
    ranks[a] = 1 + better;
  }
  return ranks;
}

double instance_weight(int instance) { return (10.0 + instance) / 10.0; }

RankTable build_rank_table(std::span<const TeamSeriesScores> scores, int instance_count) {
  RankTable table;
  table.instance_count = instance_count;
  for (const TeamSeriesScores& s : scores) {
    if (s.records.size() != s.valid.size()) {
      throw StructuralError("team '" + s.team + "': records and validity flags differ in length");
    }
    if (std::find(table.teams.begin(), table.teams.end(), s.team) == table.teams.end()) {
      table.teams.push_back(s.team);
    }
    table.series_count = std::max(table.series_count, s.series);
  }
  const std::size_t team_count = table.teams.size();

  struct Cell {
    std::vector<double> f;
    std::vector<bool> present, valid;
  };
  std::map<std::pair<int, int>, Cell> cells;
  for (const TeamSeriesScores& s : scores) {
    const auto team = static_cast<std::size_t>(
        std::find(table.teams.begin(), table.teams.end(), s.team) - table.teams.begin());
    for (std::size_t k = 0; k < s.records.size(); ++k) {
      const ScoreRecord& r = s.records[k];
      Cell& cell = cells[{s.series, r.instance}];
      if (cell.f.empty()) {
        cell.f.assign(team_count, 0.0);
        cell.present.assign(team_count, false);
        cell.valid.assign(team_count, false);
      }
      if (cell.present[team]) {
        throw StructuralError("team '" + s.team + "' has two scores for series " +
                              std::to_string(s.series) + " instance " +
                              std::to_string(r.instance));
      }
      cell.present[team] = true;
      cell.f[team] = r.f;
      cell.valid[team] = s.valid[k];
    }
  }
  for (auto& [key, cell] : cells) {
    if (std::find(cell.present.begin(), cell.present.end(), false) != cell.present.end()) {
      continue;  // left out, final_score reports it
    }
    table.ranks[key] = rank_instance(cell.f, cell.valid);
    table.validity[key] = cell.valid;
  }
  return table;
}

FinalScore final_score(const RankTable& table) {
  FinalScore result;
  result.teams = table.teams;
  // Weights are (10 + i) / 10; accumulating the integer numerators keeps the
  // total exact until the single final division.
  std::vector<std::int64_t> numerators(table.teams.size(), 0);
  for (int s = 1; s <= table.series_count; ++s) {
    for (int i = 1; i <= table.instance_count; ++i) {
      auto it = table.ranks.find({s, i});
      if (it == table.ranks.end() || it->second.size() != table.teams.size()) {
        throw IncompleteData("no complete ranks for series " + std::to_string(s) +
                             " instance " + std::to_string(i));
      }
      for (std::size_t t = 0; t < table.teams.size(); ++t) {
        numerators[t] += static_cast<std::int64_t>(10 + i) * it->second[t];
      }
    }
  }
  for (std::int64_t n : numerators) result.C.push_back(static_cast<double>(n) / 10.0);
  return result;
}

BatchReport batch_report(std::span<const ScoreRecord> records) {
  std::vector<const ScoreRecord*> by_instance(kBatchedSeriesLength + 1, nullptr);
  for (const ScoreRecord& r : records) {
    if (r.instance < 1 || r.instance > kBatchedSeriesLength) {
      throw InvalidInputError("instance index " + std::to_string(r.instance) + " out of range");
    }
    if (by_instance[static_cast<std::size_t>(r.instance)]) {
      throw InvalidInputError("instance " + std::to_string(r.instance) + " scored twice");
    }
    by_instance[static_cast<std::size_t>(r.instance)] = &r;
  }
  std::vector<ScoreRecord> ordered;
  for (int i = 1; i <= kBatchedSeriesLength; ++i) {
    if (!by_instance[static_cast<std::size_t>(i)]) {
      throw IncompleteData("no score for instance " + std::to_string(i));
    }
    ordered.push_back(*by_instance[static_cast<std::size_t>(i)]);
  }
  BatchReport report;
  report.overall = mean_of(ordered);
  for (std::size_t b = 0; b < report.batches.size(); ++b) {
    report.batches[b] = mean_of(std::span<const ScoreRecord>(ordered).subspan(b * 10, 10));
  }
  return report;
}

std::string scores_csv(std::span<const ScoreRow> rows) {
  std::string out = "series,instance,team,reltime,gap,nofeas,f,rank\n";
  for (const ScoreRow& row : rows) {
    out += csv_field(row.series) + ',' + std::to_string(row.record.instance) + ',' +
           csv_field(row.team) + ',' + format_real(row.record.reltime) + ',' +
           format_real(row.record.gap) + ',' + std::to_string(row.record.nofeas) + ',' +
           format_real(row.record.f) + ',' + std::to_string(row.rank) + '\n';
  }
  return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  static constexpr const char* kBatchNames[] = {"1-10", "11-20", "21-30", "31-40", "41-50"};
  std::string out = "team,series,batch,reltime,gap,nofeas,f\n";
  auto line = [&](const SummaryRow& row, const char* batch, const BatchMeans& m) {
    out += csv_field(row.team) + ',' + csv_field(row.series) + ',' + batch + ',' +
           format_real(m.reltime) + ',' + format_real(m.gap) + ',' + format_real(m.nofeas) +
           ',' + format_real(m.f) + '\n';
  };
  for (const SummaryRow& row : rows) {
    line(row, "all", row.report.overall);
    for (std::size_t b = 0; b < row.report.batches.size(); ++b) {
      line(row, kBatchNames[b], row.report.batches[b]);
    }
  }
  return out;
}

std::string final_csv(const FinalScore& score) {
  std::string out = "team,C\n";
  for (std::size_t t = 0; t < score.teams.size(); ++t) {
    out += csv_field(score.teams[t]) + ',' + format_real(score.C[t]) + '\n';
  }
  return out;
}

}  // namespace reoptbench
