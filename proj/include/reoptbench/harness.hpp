#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reoptbench/error.hpp"
#include "reoptbench/manifest.hpp"
#include "reoptbench/score.hpp"

namespace reoptbench {

/// Limits enforced on a solver process for one series.
struct RunLimits {
  double per_instance_time_limit_seconds = 0.0;
  /// Wall clock budget for the whole series.
  double total_budget_seconds = 0.0;
  std::uint64_t memory_limit_bytes = std::uint64_t{16} << 30;
  int thread_limit = 1;

  /// Time limit from the manifest; budget = instance count x time limit.
  static RunLimits for_manifest(const SeriesManifest& manifest);

  bool operator==(const RunLimits&) const = default;
};

void validate(const RunLimits& limits);

enum class EventKind { series_start, instance_begin, instance_end, series_end };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);

struct EventPayload {
  std::optional<double> primal_bound;
  std::optional<double> dual_bound;
  SolveStatus status = SolveStatus::error;
  std::optional<std::string> solution_path;

  bool operator==(const EventPayload&) const = default;
};

/// One protocol event. The solver writes lines
///
///   EVENT <kind> <index> <seconds> [<pb> <db> <status> <solution path>]
///
/// with the bracketed part on instance_end only. Bounds are numbers, inf, -inf
/// or '-' for none; the path is '-' for none and may contain spaces. Index is
/// 0 for series events and 1-based otherwise.
struct RunEvent {
  EventKind kind = EventKind::series_start;
  std::size_t instance_index = 0;
  /// Harness monotonic clock, seconds since the child was started.
  double timestamp_seconds = 0.0;
  /// Seconds the solver reported.
  double reported_seconds = 0.0;
  std::optional<EventPayload> payload;

  bool operator==(const RunEvent&) const = default;
};

/// Throws ProtocolError (with `line_number`) for anything but a well formed
/// event line.
RunEvent parse_event_line(std::string_view line, std::size_t line_number = 1);
std::string format_event_line(const RunEvent& event);

struct InstanceResult {
  std::size_t index = 0;
  SolveStatus status = SolveStatus::timeout_nofeas;
  SolveOutcome outcome;
  bool valid = true;
  std::string note;
  std::optional<std::string> solution_path;

  bool operator==(const InstanceResult&) const = default;
};

struct SeriesRunRecord {
  std::string manifest_path;
  std::string series_name;
  Sense sense = Sense::minimize;
  std::size_t instance_count = 0;
  RunLimits limits;
  std::vector<std::string> command;
  /// How each limit was enforced on this platform.
  std::vector<std::string> enforcement;
  std::vector<RunEvent> events;
  std::vector<InstanceResult> results;
  std::vector<std::string> protocol_violations;
  /// Set when the event log breaks ordering or finality (coverage gaps after a
  /// crash or budget kill do not reject). Every result of a rejected run is
  /// scored invalid.
  bool rejected = false;
  int exit_code = 0;

  bool operator==(const SeriesRunRecord&) const = default;
};

/// Ordering, nesting, finality and coverage checks on an event log. Returns
/// one human readable message per violation, e.g. "instance 13 missing".
/// With `require_complete` false, missing or unfinished instances and a
/// missing series_end are not reported.
std::vector<std::string> validate_event_log(std::span<const RunEvent> events,
                                            std::size_t expected_count = kSeriesLength,
                                            bool require_complete = true);

struct RunOptions {
  /// Where the solver writes solutions; exported as REOPTBENCH_SOLUTION_DIR.
  /// Defaults to <work_dir>/solutions.
  std::filesystem::path solution_dir;
  /// Scratch space for the effective manifest and the solver's stderr.
  std::filesystem::path work_dir;
};

/// Starts `command --manifest <path>` and supervises it through the event
/// protocol. Instances without a final result are scored from the incumbent
/// file <solution_dir>/<NN>.sol when one exists. A malformed line kills the
/// child and throws ProtocolError.
SeriesRunRecord run_series(const std::vector<std::string>& command,
                           const std::filesystem::path& manifest_path, const RunLimits& limits,
                           const RunOptions& options = {});

/// Recomputes results and violations from the events of `record`, reading
/// instances and solutions from disk. `unfinished_end_seconds` is the harness
/// time at which unfinished instances stopped.
void finalize_results(SeriesRunRecord& record, const SeriesManifest& manifest,
                      const std::filesystem::path& solution_dir, double unfinished_end_seconds);

/// Line-delimited JSON: a header, one line per event (instance_end lines carry
/// the folded result), one outcome line per instance without an end event,
/// and a trailer.
std::string serialize_run(const SeriesRunRecord& record);
void persist_run(const SeriesRunRecord& record, const std::filesystem::path& path);

/// Raised for a record whose last line is cut off or unreadable; carries the
/// lines read before it.
class TruncatedRecordError : public IoError {
 public:
  TruncatedRecordError(std::size_t byte_offset, SeriesRunRecord partial, const std::string& what);
  std::size_t byte_offset() const noexcept { return byte_offset_; }
  const SeriesRunRecord& partial() const noexcept { return partial_; }

 private:
  std::size_t byte_offset_;
  SeriesRunRecord partial_;
};

SeriesRunRecord deserialize_run(std::string_view text);
SeriesRunRecord load_run(const std::filesystem::path& path);

/// Scores of a run, one record per instance, with validity flags.
struct RunScores {
  std::vector<ScoreRecord> records;
  std::vector<bool> valid;
};

RunScores score_run(const SeriesRunRecord& record, int series = 1);

}  // namespace reoptbench
