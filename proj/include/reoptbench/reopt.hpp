#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reoptbench/manifest.hpp"
#include "reoptbench/model.hpp"
#include "reoptbench/score.hpp"

namespace reoptbench {

/// Objectives in requests and results are in the sense of the instance passed.
struct BackendRequest {
  double time_limit_seconds = 0.0;
  std::optional<Solution> warm_start;
  /// Only solutions strictly better than this objective are of interest.
  std::optional<double> cutoff;
};

struct BackendResult {
  SolveStatus status = SolveStatus::error;
  SolveOutcome outcome;
  std::optional<Solution> solution;
};

/// A MILP solver used by the reoptimizing baseline.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResult solve(const Instance& instance, const BackendRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// The enumeration oracle as a backend.
class OracleBackend : public Backend {
 public:
  BackendResult solve(const Instance& instance, const BackendRequest& request) override;
  std::string name() const override { return "oracle"; }
};

/// Runs an external program once per instance:
///
///   <command...> --instance <f.mps> --time-limit <s> --solution <out.sol>
///                [--warm-start <warm.sol>] [--cutoff <v>]
///
/// and reads a line `RESULT <status> <pb> <db>` from its standard output, with
/// '-' for an absent bound. The solution file is read when the status carries
/// an incumbent.
class ExecBackend : public Backend {
 public:
  ExecBackend(std::vector<std::string> command, std::filesystem::path work_dir);
  BackendResult solve(const Instance& instance, const BackendRequest& request) override;
  std::string name() const override;

 private:
  std::vector<std::string> command_;
  std::filesystem::path work_dir_;
  std::uint64_t calls_ = 0;
};

struct PoolEntry {
  Solution solution;
  /// Objective on the instance the solution was found for, as a minimization
  /// (negated for maximization instances).
  double min_objective = 0.0;
};

/// What the baseline carries from one instance of a series to the next.
struct CarryState {
  static constexpr std::size_t kPoolCapacity = 5;

  /// Most recent last; distinct by value.
  std::deque<PoolEntry> pool;
  std::optional<Instance> previous_instance;
  /// Per variable: how often it sat at its lower bound in optimal solutions.
  std::vector<std::uint32_t> at_lower_count;
  std::uint32_t optimal_count = 0;
  /// Best minimization objective per processed instance (+inf when none).
  std::vector<double> best_objective_history;
};

struct WarmStart {
  Solution solution;
  /// Objective on the next instance, in that instance's sense.
  double objective = 0.0;
};

/// Best pool solution that is feasible for `next`, preferring the most recent
/// among equals. Throws StructuralError when `next` differs in dimension from
/// the previous instance or a pool entry.
std::optional<WarmStart> carry_incumbent(const CarryState& state, const Instance& next,
                                         const FeasTolerances& tolerances = {});

struct ReoptResult {
  SolveStatus status = SolveStatus::error;
  SolveOutcome outcome;
  std::optional<Solution> solution;
  std::optional<WarmStart> warm_start;
  CarryState state;
};

/// Cutoff passed to the backend for a warm start of objective `warm`: loose
/// enough that the warm start itself survives it.
double cutoff_for(double warm_objective, Sense sense);

/// Solves `next` with a warm start from `state`. Maximization instances are
/// negated internally and reported in their own sense. The primal bound is
/// never worse than the warm start's objective. A backend exception yields
/// status error with `state` unchanged.
ReoptResult solve_reopt(const CarryState& state, const Instance& next, double time_limit_seconds,
                        Backend& backend);

/// Processes every instance of the series in order and writes protocol events
/// to `events`. Solutions go to <solution_dir>/<NN>.sol; the carried warm
/// start is written there before each solve so an interrupted instance keeps
/// an incumbent.
void serve_protocol(const SeriesManifest& manifest, Backend& backend, std::ostream& events,
                    const std::filesystem::path& solution_dir);

}  // namespace reoptbench
