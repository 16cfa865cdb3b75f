#include "reoptbench/reopt.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "process.hpp"
#include "reoptbench/error.hpp"
#include "reoptbench/harness.hpp"
#include "reoptbench/mps.hpp"
#include "reoptbench/oracle.hpp"
#include "reoptbench/solution_file.hpp"

namespace reoptbench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string two_digit(std::size_t index) {
  char buffer[24];
  std::snprintf(buffer, sizeof buffer, "%02zu", index);
  return buffer;
}

std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

Instance as_minimization(const Instance& instance) {
  if (instance.sense == Sense::minimize) return instance;
  Instance negated = instance;
  negated.sense = Sense::minimize;
  negated.objective_constant = -instance.objective_constant;
  for (Variable& v : negated.variables) v.objective = -v.objective;
  return negated;
}

std::optional<double> negate(std::optional<double> value) {
  if (!value) return value;
  return -*value;
}

void remember(CarryState& state, const Solution& solution, double min_objective) {
  for (auto it = state.pool.begin(); it != state.pool.end(); ++it) {
    if (it->solution == solution) {
      state.pool.erase(it);
      break;
    }
  }
  state.pool.push_back({solution, min_objective});
  while (state.pool.size() > CarryState::kPoolCapacity) state.pool.pop_front();
}

}  // namespace

BackendResult OracleBackend::solve(const Instance& instance, const BackendRequest& request) {
  EnumerationOptions options;
  options.warm_start = request.warm_start;
  options.cutoff = request.cutoff;
  OracleResult r = enumerate_solve(instance, request.time_limit_seconds, options);
  return {r.status, r.outcome, std::move(r.solution)};
}

ExecBackend::ExecBackend(std::vector<std::string> command, std::filesystem::path work_dir)
    : command_(std::move(command)), work_dir_(std::move(work_dir)) {
  if (command_.empty()) throw InvalidInputError("backend command is empty");
}

std::string ExecBackend::name() const { return "exec:" + command_.front(); }

BackendResult ExecBackend::solve(const Instance& instance, const BackendRequest& request) {
  const std::filesystem::path dir = work_dir_ / ("call-" + std::to_string(calls_++));
  std::filesystem::create_directories(dir);
  const std::filesystem::path mps = dir / "instance.mps";
  const std::filesystem::path out = dir / "solution.sol";
  write_mps_file(mps, instance);

  std::vector<std::string> argv = command_;
  argv.insert(argv.end(), {"--instance", mps.string(), "--time-limit",
                           format_real(request.time_limit_seconds), "--solution", out.string()});
  if (request.warm_start) {
    const std::filesystem::path warm = dir / "warm.sol";
    write_solution_file(warm, instance, *request.warm_start);
    argv.insert(argv.end(), {"--warm-start", warm.string()});
  }
  if (request.cutoff) argv.insert(argv.end(), {"--cutoff", format_real(*request.cutoff)});

  const auto start = Clock::now();
  const double grace = std::max(5.0, 0.5 * request.time_limit_seconds);
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(request.time_limit_seconds + grace));
  detail::ChildProcess child(argv, {});
  std::optional<std::string> result_line;
  std::string line;
  bool killed = false;
  while (true) {
    const auto status = child.read_line(line, deadline);
    if (status == detail::ChildProcess::ReadStatus::eof) break;
    if (status == detail::ChildProcess::ReadStatus::timeout) {
      child.kill();
      killed = true;
      break;
    }
    if (line.rfind("RESULT ", 0) == 0) result_line = line;
  }
  const int exit_code = child.wait();
  const double elapsed = seconds_since(start);

  BackendResult result;
  SolveOutcome& o = result.outcome;
  o.time_spent_seconds = elapsed;
  o.time_limit_seconds = request.time_limit_seconds;
  if (!result_line) {
    if (!killed) {
      throw Error("backend '" + command_.front() + "' exited with code " +
                  std::to_string(exit_code) + " without a RESULT line");
    }
    result.status = SolveStatus::timeout_nofeas;
  } else {
    std::istringstream fields(*result_line);
    std::string tag, status, pb, db;
    fields >> tag >> status >> pb >> db;
    result.status = solve_status_from_string(status);
    auto bound = [](const std::string& text) -> std::optional<double> {
      if (text.empty() || text == "-") return std::nullopt;
      return std::stod(text);
    };
    o.primal_bound = bound(pb);
    o.dual_bound = bound(db);
  }
  if (std::filesystem::exists(out) && result.status != SolveStatus::timeout_nofeas &&
      result.status != SolveStatus::error) {
    result.solution = read_solution_file(out, instance);
    o.has_feasible_solution = true;
    if (!o.primal_bound) o.primal_bound = objective_value(instance, *result.solution);
  }
  o.solved_to_optimality = result.status == SolveStatus::optimal && o.has_feasible_solution;
  o.stopped_early_without_zero_gap =
      !o.solved_to_optimality && o.time_spent_seconds < o.time_limit_seconds;
  return result;
}

std::optional<WarmStart> carry_incumbent(const CarryState& state, const Instance& next,
                                         const FeasTolerances& tolerances) {
  const std::size_t n = next.num_variables();
  if (state.previous_instance && state.previous_instance->num_variables() != n) {
    throw StructuralError("instance has " + std::to_string(n) +
                          " variables, the previous one had " +
                          std::to_string(state.previous_instance->num_variables()));
  }
  const double sign = next.sense == Sense::minimize ? 1.0 : -1.0;
  std::optional<WarmStart> best;
  for (auto it = state.pool.rbegin(); it != state.pool.rend(); ++it) {
    if (it->solution.values.size() != n) {
      throw StructuralError("pool solution has " + std::to_string(it->solution.values.size()) +
                            " values, instance has " + std::to_string(n) + " variables");
    }
    if (!check_feasibility(next, it->solution, tolerances).feasible) continue;
    const double objective = objective_value(next, it->solution);
    if (!best || sign * objective < sign * best->objective) best = WarmStart{it->solution, objective};
  }
  return best;
}

double cutoff_for(double warm_objective, Sense sense) {
  const double slack = 1e-9 * std::max(1.0, std::abs(warm_objective));
  return sense == Sense::minimize ? warm_objective + slack : warm_objective - slack;
}

ReoptResult solve_reopt(const CarryState& state, const Instance& next, double time_limit_seconds,
                        Backend& backend) {
  const auto start = Clock::now();
  ReoptResult result;
  result.warm_start = carry_incumbent(state, next);
  const Instance work = as_minimization(next);
  const double sign = next.sense == Sense::minimize ? 1.0 : -1.0;

  BackendRequest request;
  request.time_limit_seconds = time_limit_seconds;
  std::optional<double> warm_min;
  if (result.warm_start) {
    warm_min = sign * result.warm_start->objective;
    request.warm_start = result.warm_start->solution;
    request.cutoff = cutoff_for(*warm_min, Sense::minimize);
  }

  BackendResult br;
  try {
    br = backend.solve(work, request);
  } catch (const std::exception&) {
    result.status = SolveStatus::error;
    result.outcome.time_spent_seconds = seconds_since(start);
    result.outcome.time_limit_seconds = time_limit_seconds;
    result.state = state;
    return result;
  }

  SolveOutcome o = br.outcome;
  SolveStatus status = br.status;
  std::optional<Solution> solution = std::move(br.solution);
  if (warm_min && status != SolveStatus::error &&
      (!solution || !o.primal_bound || *o.primal_bound > *warm_min)) {
    solution = result.warm_start->solution;
    o.primal_bound = *warm_min;
    o.has_feasible_solution = true;
    const bool closed = o.dual_bound && gap(o.primal_bound, o.dual_bound) <= kOptimalityGapTolerance;
    status = closed ? SolveStatus::optimal : SolveStatus::timeout_incumbent;
  }
  o.time_spent_seconds = seconds_since(start);
  o.time_limit_seconds = time_limit_seconds;
  o.solved_to_optimality = status == SolveStatus::optimal && o.has_feasible_solution;
  o.stopped_early_without_zero_gap =
      !o.solved_to_optimality && o.time_spent_seconds < o.time_limit_seconds;

  CarryState updated = state;
  const std::size_t n = next.num_variables();
  updated.at_lower_count.resize(n, 0);
  std::optional<double> found_min;
  if (solution) {
    found_min = objective_value(work, *solution);
    remember(updated, *solution, *found_min);
    if (status == SolveStatus::optimal) {
      ++updated.optimal_count;
      for (std::size_t j = 0; j < n; ++j) {
        const double lower = next.variables[j].lower;
        if (std::isfinite(lower) && std::abs(solution->values[j] - lower) <= 1e-9) {
          ++updated.at_lower_count[j];
        }
      }
    }
  }
  updated.best_objective_history.push_back(found_min.value_or(kInfinity));
  updated.previous_instance = next;

  if (sign < 0) {
    o.primal_bound = negate(o.primal_bound);
    o.dual_bound = negate(o.dual_bound);
  }
  result.status = status;
  result.outcome = o;
  result.solution = std::move(solution);
  result.state = std::move(updated);
  return result;
}

void serve_protocol(const SeriesManifest& manifest, Backend& backend, std::ostream& events,
                    const std::filesystem::path& solution_dir) {
  const auto start = Clock::now();
  double last = -1.0;
  auto emit = [&](EventKind kind, std::size_t index, std::optional<EventPayload> payload) {
    RunEvent e;
    e.kind = kind;
    e.instance_index = index;
    // Printed with nanosecond digits; keep consecutive stamps distinct.
    e.reported_seconds = std::max(seconds_since(start), last + 1e-6);
    last = e.reported_seconds;
    e.payload = std::move(payload);
    events << format_event_line(e) << '\n' << std::flush;
  };
  auto failed = [] {
    EventPayload p;
    p.status = SolveStatus::error;
    return p;
  };

  std::filesystem::create_directories(solution_dir);
  emit(EventKind::series_start, 0, std::nullopt);
  CarryState state;
  for (std::size_t i = 1; i <= manifest.instance_files.size(); ++i) {
    emit(EventKind::instance_begin, i, std::nullopt);
    const std::filesystem::path path =
        std::filesystem::absolute(solution_dir / (two_digit(i) + ".sol"));
    ReoptResult r;
    Instance instance;
    try {
      instance = promote_unit_integers(read_mps_file(manifest.instance_path(i)));
      if (const auto warm = carry_incumbent(state, instance)) {
        write_solution_file(path, instance, warm->solution);
      }
      r = solve_reopt(state, instance, manifest.time_limit_seconds, backend);
    } catch (const Error&) {
      emit(EventKind::instance_end, i, failed());
      continue;
    }
    EventPayload payload;
    payload.status = r.status;
    payload.primal_bound = r.outcome.primal_bound;
    payload.dual_bound = r.outcome.dual_bound;
    if (r.solution) {
      write_solution_file(path, instance, *r.solution);
      payload.solution_path = path.string();
    }
    emit(EventKind::instance_end, i, payload);
    state = std::move(r.state);
  }
  emit(EventKind::series_end, 0, std::nullopt);
}

}  // namespace reoptbench
