#include "reoptbench/harness.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "process.hpp"
#include "reoptbench/mps.hpp"
#include "reoptbench/solution_file.hpp"

namespace reoptbench {

using nlohmann::json;

namespace {

constexpr std::pair<EventKind, const char*> kEventNames[] = {
    {EventKind::series_start, "series_start"},
    {EventKind::instance_begin, "instance_begin"},
    {EventKind::instance_end, "instance_end"},
    {EventKind::series_end, "series_end"},
};

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string format_seconds(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, "%.9f", value);
  return buffer;
}

std::string two_digit(std::size_t index) {
  char buffer[24];
  std::snprintf(buffer, sizeof buffer, "%02zu", index);
  return buffer;
}

// Splits off up to `count` whitespace separated tokens; `rest` receives the
// remainder with surrounding whitespace removed.
std::vector<std::string_view> tokens(std::string_view line, std::size_t count,
                                     std::string_view& rest) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (out.size() < count) {
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos == line.size()) break;
    const std::size_t start = pos;
    while (pos < line.size() && !is_space(line[pos])) ++pos;
    out.push_back(line.substr(start, pos - start));
  }
  while (pos < line.size() && is_space(line[pos])) ++pos;
  std::size_t end = line.size();
  while (end > pos && is_space(line[end - 1])) --end;
  rest = line.substr(pos, end - pos);
  return out;
}

std::optional<double> parse_real(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || std::isnan(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> parse_bound(std::string_view text, std::size_t line, const char* what) {
  if (text == "-" || text == "none") return std::nullopt;
  const std::optional<double> value = parse_real(text);
  if (!value) {
    throw ProtocolError(line, std::string("malformed ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

json real_to_json(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

json optional_real_to_json(const std::optional<double>& value) {
  return value ? real_to_json(*value) : json(nullptr);
}

double real_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    throw IoError("unexpected real '" + s + "'");
  }
  return j.get<double>();
}

std::optional<double> optional_real_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return real_from_json(j);
}

json optional_string_to_json(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

std::optional<std::string> optional_string_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

json result_to_json(const InstanceResult& r) {
  const SolveOutcome& o = r.outcome;
  return {
      {"index", r.index},
      {"status", std::string(to_string(r.status))},
      {"time_spent", o.time_spent_seconds},
      {"time_limit", o.time_limit_seconds},
      {"solved", o.solved_to_optimality},
      {"pb", optional_real_to_json(o.primal_bound)},
      {"db", optional_real_to_json(o.dual_bound)},
      {"has_feasible", o.has_feasible_solution},
      {"stopped_early", o.stopped_early_without_zero_gap},
      {"valid", r.valid},
      {"note", r.note},
      {"solution", optional_string_to_json(r.solution_path)},
  };
}

InstanceResult result_from_json(const json& j) {
  InstanceResult r;
  r.index = j.at("index").get<std::size_t>();
  r.status = solve_status_from_string(j.at("status").get<std::string>());
  r.outcome.time_spent_seconds = j.at("time_spent").get<double>();
  r.outcome.time_limit_seconds = j.at("time_limit").get<double>();
  r.outcome.solved_to_optimality = j.at("solved").get<bool>();
  r.outcome.primal_bound = optional_real_from_json(j.at("pb"));
  r.outcome.dual_bound = optional_real_from_json(j.at("db"));
  r.outcome.has_feasible_solution = j.at("has_feasible").get<bool>();
  r.outcome.stopped_early_without_zero_gap = j.at("stopped_early").get<bool>();
  r.valid = j.at("valid").get<bool>();
  r.note = j.at("note").get<std::string>();
  r.solution_path = optional_string_from_json(j.at("solution"));
  return r;
}

json event_to_json(const RunEvent& e) {
  json j = {
      {"type", "event"},
      {"kind", std::string(to_string(e.kind))},
      {"index", e.instance_index},
      {"t", e.timestamp_seconds},
      {"reported", e.reported_seconds},
  };
  if (e.payload) {
    j["payload"] = {
        {"pb", optional_real_to_json(e.payload->primal_bound)},
        {"db", optional_real_to_json(e.payload->dual_bound)},
        {"status", std::string(to_string(e.payload->status))},
        {"solution", optional_string_to_json(e.payload->solution_path)},
    };
  }
  return j;
}

RunEvent event_from_json(const json& j) {
  RunEvent e;
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.instance_index = j.at("index").get<std::size_t>();
  e.timestamp_seconds = j.at("t").get<double>();
  e.reported_seconds = j.at("reported").get<double>();
  if (j.contains("payload")) {
    const json& p = j.at("payload");
    EventPayload payload;
    payload.primal_bound = optional_real_from_json(p.at("pb"));
    payload.dual_bound = optional_real_from_json(p.at("db"));
    payload.status = solve_status_from_string(p.at("status").get<std::string>());
    payload.solution_path = optional_string_from_json(p.at("solution"));
    e.payload = payload;
  }
  return e;
}

std::filesystem::path make_work_dir() {
  static std::atomic<unsigned> counter{0};
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("reoptbench-run-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

void fill_outcome(InstanceResult& r, const Instance* instance, const std::optional<Solution>& sol,
                  const RunEvent* end, double time_spent) {
  SolveOutcome& o = r.outcome;
  o.time_spent_seconds = std::max(0.0, time_spent);

  std::optional<double> objective;
  bool feasible = false;
  if (sol && instance) {
    objective = objective_value(*instance, *sol);
    const FeasReport report = check_feasibility(*instance, *sol);
    feasible = report.feasible;
    if (!feasible) {
      r.note = "returned solution is infeasible (worst offender " + report.worst_offender + ")";
    }
  }

  if (!end) {
    o.solved_to_optimality = false;
    o.stopped_early_without_zero_gap = false;
    if (feasible) {
      r.status = SolveStatus::timeout_incumbent;
      o.primal_bound = objective;
      o.has_feasible_solution = true;
    } else {
      r.status = SolveStatus::timeout_nofeas;
      if (sol) r.note = "incumbent file rejected: " + r.note;
    }
    if (r.note.empty()) r.note = "no final result; scored at termination";
    return;
  }

  const EventPayload& p = *end->payload;
  r.status = p.status;
  o.primal_bound = p.primal_bound;
  o.dual_bound = p.dual_bound;
  if (sol && instance) {
    if (!feasible) {
      r.valid = false;
    } else {
      o.has_feasible_solution = true;
      if (!o.primal_bound) {
        o.primal_bound = objective;
      } else if (std::abs(*o.primal_bound - *objective) >
                 kDualBoundTolerance * std::max(1.0, std::abs(*objective))) {
        r.valid = false;
        r.note = "primal bound " + format_real(*o.primal_bound) +
                 " does not match the solution objective " + format_real(*objective);
      }
    }
  } else if (p.status == SolveStatus::optimal || p.status == SolveStatus::timeout_incumbent) {
    r.valid = false;
    if (r.note.empty()) r.note = "status " + std::string(to_string(p.status)) + " without a solution";
  }
  o.solved_to_optimality = p.status == SolveStatus::optimal && o.has_feasible_solution;
  if (instance && dual_bound_crosses(o.primal_bound, o.dual_bound, instance->sense)) {
    r.valid = false;
    r.note = "dual bound " + format_real(*o.dual_bound) + " crosses primal bound " +
             format_real(*o.primal_bound);
  }
  o.stopped_early_without_zero_gap =
      !o.solved_to_optimality && o.time_spent_seconds < o.time_limit_seconds;
}

}  // namespace

RunLimits RunLimits::for_manifest(const SeriesManifest& manifest) {
  RunLimits limits;
  limits.per_instance_time_limit_seconds = manifest.time_limit_seconds;
  limits.total_budget_seconds =
      static_cast<double>(manifest.instance_files.size()) * manifest.time_limit_seconds;
  return limits;
}

void validate(const RunLimits& limits) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0; };
  if (!positive(limits.per_instance_time_limit_seconds)) {
    throw InvalidInputError("per-instance time limit must be positive and finite");
  }
  if (!positive(limits.total_budget_seconds)) {
    throw InvalidInputError("total time budget must be positive and finite");
  }
  if (limits.total_budget_seconds < limits.per_instance_time_limit_seconds) {
    throw InvalidInputError("total time budget is below the per-instance time limit");
  }
  if (limits.memory_limit_bytes == 0) throw InvalidInputError("memory limit must be positive");
  if (limits.thread_limit != 1) throw InvalidInputError("solvers run with exactly one thread");
}

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kEventNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

EventKind event_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kEventNames) {
    if (name == n) return k;
  }
  throw InvalidInputError("unknown event kind '" + std::string(name) + "'");
}

RunEvent parse_event_line(std::string_view line, std::size_t line_number) {
  std::string_view rest;
  const std::vector<std::string_view> t = tokens(line, 7, rest);
  if (t.empty() || t[0] != "EVENT") {
    throw ProtocolError(line_number, "expected an EVENT line, got '" + std::string(line) + "'");
  }
  if (t.size() < 4) throw ProtocolError(line_number, "EVENT line needs kind, index and time");
  RunEvent e;
  try {
    e.kind = event_kind_from_string(t[1]);
  } catch (const InvalidInputError&) {
    throw ProtocolError(line_number, "unknown event kind '" + std::string(t[1]) + "'");
  }
  const auto [ptr, ec] = std::from_chars(t[2].data(), t[2].data() + t[2].size(), e.instance_index);
  if (ec != std::errc() || ptr != t[2].data() + t[2].size()) {
    throw ProtocolError(line_number, "malformed instance index '" + std::string(t[2]) + "'");
  }
  const std::optional<double> seconds = parse_real(t[3]);
  if (!seconds || !std::isfinite(*seconds) || *seconds < 0) {
    throw ProtocolError(line_number, "malformed timestamp '" + std::string(t[3]) + "'");
  }
  e.reported_seconds = *seconds;

  if (e.kind != EventKind::instance_end) {
    if (t.size() > 4 || !rest.empty()) {
      throw ProtocolError(line_number, "unexpected fields after " + std::string(t[1]));
    }
    return e;
  }
  if (t.size() < 7) {
    throw ProtocolError(line_number, "instance_end needs primal bound, dual bound and status");
  }
  EventPayload p;
  p.primal_bound = parse_bound(t[4], line_number, "primal bound");
  p.dual_bound = parse_bound(t[5], line_number, "dual bound");
  try {
    p.status = solve_status_from_string(t[6]);
  } catch (const InvalidInputError&) {
    throw ProtocolError(line_number, "unknown status '" + std::string(t[6]) + "'");
  }
  if (!rest.empty() && rest != "-") p.solution_path = std::string(rest);
  e.payload = p;
  return e;
}

std::string format_event_line(const RunEvent& e) {
  std::string line = "EVENT " + std::string(to_string(e.kind)) + " " +
                     std::to_string(e.instance_index) + " " + format_seconds(e.reported_seconds);
  if (e.kind == EventKind::instance_end) {
    const EventPayload p = e.payload.value_or(EventPayload{});
    line += " " + (p.primal_bound ? format_real(*p.primal_bound) : std::string("-"));
    line += " " + (p.dual_bound ? format_real(*p.dual_bound) : std::string("-"));
    line += " " + std::string(to_string(p.status));
    line += " " + p.solution_path.value_or("-");
  }
  return line;
}

std::vector<std::string> validate_event_log(std::span<const RunEvent> events,
                                            std::size_t expected_count, bool require_complete) {
  std::vector<std::string> v;
  if (events.empty()) {
    v.push_back("event log is empty");
  } else {
    if (events.front().kind != EventKind::series_start) {
      v.push_back("event log does not start with series_start");
    }
    if (require_complete && events.back().kind != EventKind::series_end) {
      v.push_back("event log does not end with series_end");
    }
  }
  std::vector<char> begun(expected_count + 1, 0), finalized(expected_count + 1, 0);
  std::size_t open = 0;
  std::size_t last_begun = 0;
  bool ended = false;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const RunEvent& e = events[k];
    if (k > 0) {
      if (!(e.timestamp_seconds > events[k - 1].timestamp_seconds)) {
        v.push_back("event " + std::to_string(k + 1) + " does not advance the harness clock");
      }
      if (!(e.reported_seconds > events[k - 1].reported_seconds)) {
        v.push_back("event " + std::to_string(k + 1) + " reports a non-increasing time");
      }
    }
    if (ended) v.push_back("event " + std::to_string(k + 1) + " after series_end");
    const std::size_t i = e.instance_index;
    switch (e.kind) {
      case EventKind::series_start:
        if (k > 0) v.push_back("duplicate series_start");
        break;
      case EventKind::series_end:
        if (open) v.push_back("series_end while instance " + std::to_string(open) + " is open");
        ended = true;
        break;
      case EventKind::instance_begin:
        if (i < 1 || i > expected_count) {
          v.push_back("instance index " + std::to_string(i) + " out of range");
          break;
        }
        if (begun[i]) {
          v.push_back("instance " + std::to_string(i) + " begun twice");
        } else if (i < last_begun) {
          v.push_back("instance " + std::to_string(i) + " begun out of order");
        }
        if (open) {
          v.push_back("instance " + std::to_string(i) + " begun while instance " +
                      std::to_string(open) + " is open");
        }
        begun[i] = 1;
        last_begun = std::max(last_begun, i);
        open = i;
        break;
      case EventKind::instance_end:
        if (i < 1 || i > expected_count) {
          v.push_back("instance index " + std::to_string(i) + " out of range");
          break;
        }
        if (finalized[i]) {
          v.push_back("result modified after finalization (instance " + std::to_string(i) + ")");
          break;
        }
        if (open != i) {
          v.push_back("instance " + std::to_string(i) + " finalized out of order" +
                      (open ? " (instance " + std::to_string(open) + " is open)" : ""));
        }
        finalized[i] = 1;
        if (open == i) open = 0;
        break;
    }
  }
  for (std::size_t i = 1; require_complete && i <= expected_count; ++i) {
    if (!begun[i] && !finalized[i]) {
      v.push_back("instance " + std::to_string(i) + " missing");
    } else if (!finalized[i]) {
      v.push_back("instance " + std::to_string(i) + " not finalized");
    }
  }
  return v;
}

void finalize_results(SeriesRunRecord& record, const SeriesManifest& manifest,
                      const std::filesystem::path& solution_dir, double unfinished_end_seconds) {
  record.results.clear();
  const std::size_t n = manifest.instance_files.size();
  for (std::size_t i = 1; i <= n; ++i) {
    const RunEvent* begin = nullptr;
    const RunEvent* end = nullptr;
    const RunEvent* previous = nullptr;
    for (const RunEvent& e : record.events) {
      if (e.instance_index == i && e.kind == EventKind::instance_begin && !begin) begin = &e;
      if (e.instance_index == i && e.kind == EventKind::instance_end && !end) {
        end = &e;
        break;
      }
      previous = &e;
    }

    InstanceResult r;
    r.index = i;
    r.outcome.time_limit_seconds = record.limits.per_instance_time_limit_seconds;

    std::optional<Instance> instance;
    try {
      instance = promote_unit_integers(read_mps_file(manifest.instance_path(i)));
      if (i == 1) record.sense = instance->sense;
    } catch (const Error& e) {
      r.note = std::string("instance unreadable: ") + e.what();
    }

    if (end) {
      r.solution_path = end->payload->solution_path;
    } else {
      const std::filesystem::path incumbent = solution_dir / (two_digit(i) + ".sol");
      if (std::filesystem::exists(incumbent)) r.solution_path = incumbent.string();
    }

    std::optional<Solution> sol;
    if (r.solution_path && instance) {
      try {
        sol = read_solution_file(*r.solution_path, *instance);
      } catch (const Error& e) {
        r.note = std::string("solution unreadable: ") + e.what();
      }
    }

    double time_spent = 0.0;
    if (end) {
      const double start = begin ? begin->timestamp_seconds
                                 : (previous ? previous->timestamp_seconds : end->timestamp_seconds);
      time_spent = end->timestamp_seconds - start;
    } else if (begin) {
      time_spent = unfinished_end_seconds - begin->timestamp_seconds;
    }
    fill_outcome(r, instance ? &*instance : nullptr, sol, end, time_spent);
    if (!instance && end && r.solution_path) r.valid = false;
    record.results.push_back(std::move(r));
  }
}

SeriesRunRecord run_series(const std::vector<std::string>& command,
                           const std::filesystem::path& manifest_path, const RunLimits& limits,
                           const RunOptions& options) {
  using Clock = detail::ChildProcess::Clock;
  validate(limits);
  if (command.empty()) throw InvalidInputError("solver command is empty");
  const SeriesManifest manifest = load_manifest(manifest_path);

  std::filesystem::path work_dir = options.work_dir.empty() ? make_work_dir() : options.work_dir;
  std::filesystem::create_directories(work_dir);
  const std::filesystem::path solution_dir =
      options.solution_dir.empty() ? work_dir / "solutions" : options.solution_dir;
  std::filesystem::create_directories(solution_dir);

  std::filesystem::path child_manifest = std::filesystem::absolute(manifest_path);
  if (limits.per_instance_time_limit_seconds != manifest.time_limit_seconds) {
    SeriesManifest effective = manifest;
    effective.time_limit_seconds = limits.per_instance_time_limit_seconds;
    for (std::size_t i = 1; i <= manifest.instance_files.size(); ++i) {
      effective.instance_files[i - 1] = std::filesystem::absolute(manifest.instance_path(i)).string();
    }
    child_manifest = work_dir / "effective_manifest.json";
    save_manifest(child_manifest, effective);
  }

  SeriesRunRecord record;
  record.manifest_path = std::filesystem::absolute(manifest_path).string();
  record.series_name = manifest.series_name;
  record.instance_count = manifest.instance_files.size();
  record.limits = limits;
  record.command = command;
  record.enforcement = {
      "per-instance time limit: passed to the solver as time_limit_seconds in the manifest",
      "total budget: wall clock, the solver process group is killed when it runs out",
      "memory: RLIMIT_AS of " + std::to_string(limits.memory_limit_bytes) + " bytes",
      "threads: OMP_NUM_THREADS and similar set to " + std::to_string(limits.thread_limit) +
          "; advisory, not enforced by the kernel",
  };

  std::vector<std::string> argv = command;
  argv.push_back("--manifest");
  argv.push_back(child_manifest.string());
  detail::SpawnOptions spawn;
  const std::string threads = std::to_string(limits.thread_limit);
  spawn.environment = {
      {"REOPTBENCH_SOLUTION_DIR", solution_dir.string()},
      {"OMP_NUM_THREADS", threads},
      {"OPENBLAS_NUM_THREADS", threads},
      {"MKL_NUM_THREADS", threads},
  };
  spawn.address_space_limit_bytes = limits.memory_limit_bytes;
  spawn.stderr_path = (work_dir / "solver.stderr").string();

  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(limits.total_budget_seconds));
  auto since_start = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  std::vector<std::string> extra;
  detail::ChildProcess child(argv, spawn);
  std::string line;
  std::size_t line_number = 0;
  bool killed = false;
  while (true) {
    const auto status = child.read_line(line, deadline);
    if (status == detail::ChildProcess::ReadStatus::eof) break;
    if (status == detail::ChildProcess::ReadStatus::timeout) {
      child.kill();
      killed = true;
      extra.push_back("total time budget of " + format_real(limits.total_budget_seconds) +
                      " s exhausted; solver terminated");
      break;
    }
    ++line_number;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    RunEvent event;
    try {
      event = parse_event_line(line, line_number);
    } catch (const ProtocolError&) {
      child.kill();
      child.wait();
      throw;
    }
    event.timestamp_seconds = since_start();
    if (!record.events.empty()) {
      event.timestamp_seconds =
          std::max(event.timestamp_seconds,
                   std::nextafter(record.events.back().timestamp_seconds, kInfinity));
    }
    record.events.push_back(std::move(event));
  }
  record.exit_code = child.wait();
  const double end_seconds = since_start();
  if (!killed && record.exit_code != 0) {
    extra.push_back("solver exited with code " + std::to_string(record.exit_code));
  }

  finalize_results(record, manifest, solution_dir, end_seconds);
  record.protocol_violations = validate_event_log(record.events, record.instance_count);
  record.rejected = !validate_event_log(record.events, record.instance_count, false).empty();
  record.protocol_violations.insert(record.protocol_violations.end(), extra.begin(), extra.end());
  return record;
}

std::string serialize_run(const SeriesRunRecord& record) {
  std::string out;
  const json header = {
      {"type", "header"},
      {"manifest", record.manifest_path},
      {"series_name", record.series_name},
      {"sense", std::string(to_string(record.sense))},
      {"instance_count", record.instance_count},
      {"command", record.command},
      {"limits",
       {{"per_instance_time_limit_seconds", record.limits.per_instance_time_limit_seconds},
        {"total_budget_seconds", record.limits.total_budget_seconds},
        {"memory_limit_bytes", record.limits.memory_limit_bytes},
        {"thread_limit", record.limits.thread_limit}}},
      {"enforcement", record.enforcement},
  };
  out += header.dump() + "\n";

  std::vector<char> folded(record.results.size(), 0);
  auto result_index = [&](std::size_t instance) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < record.results.size(); ++k) {
      if (record.results[k].index == instance) return k;
    }
    return std::nullopt;
  };
  for (const RunEvent& e : record.events) {
    json j = event_to_json(e);
    if (e.kind == EventKind::instance_end) {
      const auto k = result_index(e.instance_index);
      if (k && !folded[*k]) {
        j["result"] = result_to_json(record.results[*k]);
        folded[*k] = 1;
      }
    }
    out += j.dump() + "\n";
  }
  for (std::size_t k = 0; k < record.results.size(); ++k) {
    if (folded[k]) continue;
    out += json({{"type", "outcome"}, {"result", result_to_json(record.results[k])}}).dump() + "\n";
  }
  const json trailer = {
      {"type", "trailer"},
      {"protocol_violations", record.protocol_violations},
      {"rejected", record.rejected},
      {"exit_code", record.exit_code},
  };
  out += trailer.dump() + "\n";
  return out;
}

void persist_run(const SeriesRunRecord& record, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << serialize_run(record);
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

TruncatedRecordError::TruncatedRecordError(std::size_t byte_offset, SeriesRunRecord partial,
                                           const std::string& what)
    : IoError(what), byte_offset_(byte_offset), partial_(std::move(partial)) {}

SeriesRunRecord deserialize_run(std::string_view text) {
  SeriesRunRecord record;
  bool have_header = false;
  bool have_trailer = false;
  std::size_t offset = 0;
  while (offset < text.size()) {
    const std::size_t newline = text.find('\n', offset);
    const bool last = newline == std::string_view::npos;
    const std::string_view line =
        text.substr(offset, last ? std::string_view::npos : newline - offset);
    const std::size_t line_offset = offset;
    offset = last ? text.size() : newline + 1;
    if (line.empty()) continue;

    json j;
    try {
      j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        record.manifest_path = j.at("manifest").get<std::string>();
        record.series_name = j.at("series_name").get<std::string>();
        record.sense =
            j.at("sense").get<std::string>() == "maximize" ? Sense::maximize : Sense::minimize;
        record.instance_count = j.at("instance_count").get<std::size_t>();
        record.command = j.at("command").get<std::vector<std::string>>();
        const json& l = j.at("limits");
        record.limits.per_instance_time_limit_seconds =
            l.at("per_instance_time_limit_seconds").get<double>();
        record.limits.total_budget_seconds = l.at("total_budget_seconds").get<double>();
        record.limits.memory_limit_bytes = l.at("memory_limit_bytes").get<std::uint64_t>();
        record.limits.thread_limit = l.at("thread_limit").get<int>();
        record.enforcement = j.at("enforcement").get<std::vector<std::string>>();
        have_header = true;
      } else if (type == "event") {
        record.events.push_back(event_from_json(j));
        if (j.contains("result")) record.results.push_back(result_from_json(j.at("result")));
      } else if (type == "outcome") {
        record.results.push_back(result_from_json(j.at("result")));
      } else if (type == "trailer") {
        record.protocol_violations = j.at("protocol_violations").get<std::vector<std::string>>();
        record.rejected = j.at("rejected").get<bool>();
        record.exit_code = j.at("exit_code").get<int>();
        have_trailer = true;
      } else {
        throw IoError("unknown record line type '" + type + "'");
      }
    } catch (const std::exception& e) {
      if (last || offset >= text.size()) {
        std::sort(record.results.begin(), record.results.end(),
                  [](const InstanceResult& a, const InstanceResult& b) { return a.index < b.index; });
        throw TruncatedRecordError(line_offset, std::move(record),
                                   "run record truncated at byte offset " +
                                       std::to_string(line_offset) + ": " + e.what());
      }
      throw IoError("run record corrupt at byte offset " + std::to_string(line_offset) + ": " +
                    e.what());
    }
  }
  std::sort(record.results.begin(), record.results.end(),
            [](const InstanceResult& a, const InstanceResult& b) { return a.index < b.index; });
  if (!have_header) throw IoError("run record has no header line");
  if (!have_trailer) {
    throw TruncatedRecordError(text.size(), std::move(record),
                               "run record truncated at byte offset " +
                                   std::to_string(text.size()) + ": no trailer line");
  }
  return record;
}

SeriesRunRecord load_run(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize_run(buffer.str());
}

RunScores score_run(const SeriesRunRecord& record, int series) {
  RunScores scores;
  for (const InstanceResult& r : record.results) {
    scores.records.push_back(instance_score(r.outcome, series, static_cast<int>(r.index)));
    scores.valid.push_back(r.valid && !record.rejected);
  }
  return scores;
}

}  // namespace reoptbench
