#pragma once

#include <cstdint>
#include <optional>

#include "reoptbench/model.hpp"
#include "reoptbench/score.hpp"

namespace reoptbench {

/// Exhaustive reference solver for small instances.
///
/// Integer variables range over their bounded domains. A continuous variable is
/// only accepted when it is linked to one binary y by a pair of rows
/// x - l*y >= 0 and x - u*y <= 0 (either coefficient may be absent, meaning 0);
/// it then takes one of the vertex values l*y or u*y. The search does not solve
/// the LP over continuous variables, so results are exact only for instances
/// whose optima lie on those vertices, as in the semicontinuous generator.
struct EnumerationOptions {
  /// Upper limit on the number of enumerated assignments.
  std::uint64_t domain_cap = std::uint64_t{1} << 24;
  FeasTolerances tolerances;
  /// Evaluated first; becomes the incumbent when feasible.
  std::optional<Solution> warm_start;
  /// Only assignments strictly better than this objective are accepted.
  std::optional<double> cutoff;
};

struct OracleResult {
  SolveStatus status = SolveStatus::timeout_nofeas;
  SolveOutcome outcome;
  std::optional<Solution> solution;
  std::uint64_t assignments_visited = 0;
};

/// Number of assignments enumerate_solve would visit. Throws CapabilityError
/// for unbounded integers, unlinked continuous variables, or a product above
/// the cap.
std::uint64_t enumeration_size(const Instance& instance,
                               std::uint64_t domain_cap = std::uint64_t{1} << 24);

/// Visits integer assignments in lexicographic order (first integer variable
/// slowest) and, for each, the continuous vertex choices with the lower vertex
/// first. Among equally good assignments the first visited is kept.
///
/// Reports optimal with pb == db when the search completes with an incumbent; a completed search without one reports
/// timeout_nofeas with the dual bound at the cutoff (or infinity). When the
/// time limit expires the incumbent, if any, is reported without a dual bound.
OracleResult enumerate_solve(const Instance& instance, double time_limit_seconds,
                             const EnumerationOptions& options = {});

}  // namespace reoptbench
