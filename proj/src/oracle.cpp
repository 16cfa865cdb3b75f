#include "reoptbench/oracle.hpp"

#include <chrono>
#include <cmath>

#include "reoptbench/error.hpp"

namespace reoptbench {

namespace {

constexpr std::size_t kNoVariable = static_cast<std::size_t>(-1);

struct IntegerDomain {
  std::size_t index;
  double lower;
  double upper;
};

struct Link {
  std::size_t y = kNoVariable;
  double factor = 0.0;
  bool present = false;
};

struct ContinuousChoice {
  std::size_t index;
  std::size_t y;  // kNoVariable: the vertex values do not depend on a binary
  double lower_factor;
  double upper_factor;
};

struct Plan {
  std::vector<IntegerDomain> integers;
  std::vector<ContinuousChoice> continuous;
  std::uint64_t size = 1;
};

bool is_unit_integer(const Variable& v) {
  return is_integral(v.kind) && v.lower >= 0.0 && v.upper <= 1.0;
}

void multiply_checked(std::uint64_t& size, std::uint64_t factor, std::uint64_t cap) {
  if (factor != 0 && size > cap / factor) {
    throw CapabilityError("enumeration exceeds the cap of " + std::to_string(cap) +
                          " assignments");
  }
  size *= factor;
  if (size > cap) {
    throw CapabilityError("enumeration exceeds the cap of " + std::to_string(cap) +
                          " assignments");
  }
}

// Collects x >= k*y and x <= k*y links from rows with a zero side and at most
// one unit-integer partner.
void collect_links(const Instance& instance, std::vector<Link>& lower_links,
                   std::vector<Link>& upper_links) {
  for (const Row& row : instance.rows) {
    if (row.coefficients.empty() || row.coefficients.size() > 2) continue;
    std::size_t x = kNoVariable;
    double a = 0.0;
    std::size_t y = kNoVariable;
    double b = 0.0;
    bool usable = true;
    for (const Entry& e : row.coefficients) {
      const Variable& v = instance.variables[e.index];
      if (v.kind == VarKind::continuous && x == kNoVariable) {
        x = e.index;
        a = e.value;
      } else if (is_unit_integer(v) && y == kNoVariable) {
        y = e.index;
        b = e.value;
      } else {
        usable = false;
      }
    }
    if (!usable || x == kNoVariable) continue;
    const bool lower_zero = row.lhs == 0.0;
    const bool upper_zero = row.rhs == 0.0;
    const bool lower_open = std::isinf(row.lhs);
    const bool upper_open = std::isinf(row.rhs);
    // a*x + b*y in [lhs, rhs]  =>  x compared with (-b/a)*y
    const Link link{y, y == kNoVariable ? 0.0 : -b / a, true};
    const bool gives_ge = (lower_zero && a > 0) || (upper_zero && a < 0);
    const bool gives_le = (upper_zero && a > 0) || (lower_zero && a < 0);
    if (!(lower_zero || lower_open) || !(upper_zero || upper_open)) continue;
    if (gives_ge && !lower_links[x].present) lower_links[x] = link;
    if (gives_le && !upper_links[x].present) upper_links[x] = link;
  }
}

Plan make_plan(const Instance& instance, std::uint64_t cap) {
  Plan plan;
  std::vector<Link> lower_links(instance.num_variables());
  std::vector<Link> upper_links(instance.num_variables());
  collect_links(instance, lower_links, upper_links);

  for (std::size_t j = 0; j < instance.num_variables(); ++j) {
    const Variable& v = instance.variables[j];
    if (is_integral(v.kind)) {
      const double lo = std::ceil(v.lower - 1e-9);
      const double hi = std::floor(v.upper + 1e-9);
      if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw CapabilityError("integer variable '" + v.name + "' has an unbounded domain");
      }
      if (hi - lo + 1.0 > static_cast<double>(cap)) {
        throw CapabilityError("domain of '" + v.name + "' exceeds the enumeration cap");
      }
      const auto width = hi < lo ? std::uint64_t{0} : static_cast<std::uint64_t>(hi - lo) + 1;
      multiply_checked(plan.size, width, cap);
      plan.integers.push_back({j, lo, hi});
      continue;
    }
    if (v.lower == v.upper) {
      plan.continuous.push_back({j, kNoVariable, v.lower, v.lower});
      continue;
    }
    const Link& lo = lower_links[j];
    const Link& up = upper_links[j];
    if (!lo.present || !up.present) {
      throw CapabilityError("continuous variable '" + v.name +
                            "' is not linked to a binary by vertex rows");
    }
    if (lo.y != kNoVariable && up.y != kNoVariable && lo.y != up.y) {
      throw CapabilityError("continuous variable '" + v.name + "' is linked to two binaries");
    }
    const std::size_t y = lo.y != kNoVariable ? lo.y : up.y;
    plan.continuous.push_back({j, y, lo.factor, up.factor});
    multiply_checked(plan.size, 2, cap);
  }
  return plan;
}

double vertex_value(const ContinuousChoice& c, const std::vector<double>& values, int choice) {
  if (c.y == kNoVariable) return choice == 0 ? c.lower_factor : c.upper_factor;
  return (choice == 0 ? c.lower_factor : c.upper_factor) * values[c.y];
}

}  // namespace

std::uint64_t enumeration_size(const Instance& instance, std::uint64_t domain_cap) {
  return make_plan(instance, domain_cap).size;
}

OracleResult enumerate_solve(const Instance& instance, double time_limit_seconds,
                             const EnumerationOptions& options) {
  using Clock = std::chrono::steady_clock;
  if (std::isnan(time_limit_seconds) || time_limit_seconds < 0) {
    throw InvalidInputError("time limit must be non-negative");
  }
  validate(instance);
  const Plan plan = make_plan(instance, options.domain_cap);
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  const double sign = instance.sense == Sense::minimize ? 1.0 : -1.0;
  std::optional<double> best_key;
  if (options.cutoff) best_key = sign * *options.cutoff;
  bool have_incumbent = false;
  Solution incumbent;

  auto consider = [&](const std::vector<double>& values) {
    const double key = sign * objective_value(instance, values);
    if (best_key && !(key < *best_key)) return;
    if (!check_feasibility(instance, values, options.tolerances).feasible) return;
    best_key = key;
    incumbent.values = values;
    have_incumbent = true;
  };

  if (options.warm_start) {
    if (options.warm_start->values.size() != instance.num_variables()) {
      throw StructuralError("warm start has " + std::to_string(options.warm_start->values.size()) +
                            " values, instance has " +
                            std::to_string(instance.num_variables()) + " variables");
    }
    consider(options.warm_start->values);
  }

  OracleResult result;
  bool timed_out = time_limit_seconds <= 0.0;
  std::vector<double> values(instance.num_variables(), 0.0);
  std::vector<double> current;
  for (const IntegerDomain& d : plan.integers) current.push_back(d.lower);
  const bool empty_domain = plan.size == 0;
  std::vector<int> choice(plan.continuous.size(), 0);

  while (!timed_out && !empty_domain) {
    for (std::size_t k = 0; k < plan.integers.size(); ++k) {
      values[plan.integers[k].index] = current[k];
    }
    std::fill(choice.begin(), choice.end(), 0);
    while (true) {
      for (std::size_t k = 0; k < plan.continuous.size(); ++k) {
        values[plan.continuous[k].index] = vertex_value(plan.continuous[k], values, choice[k]);
      }
      consider(values);
      if (++result.assignments_visited % 4096 == 0 && elapsed() >= time_limit_seconds) {
        timed_out = true;
        break;
      }
      // The upper vertex is skipped where it coincides with the lower one.
      std::size_t k = plan.continuous.size();
      bool advanced = false;
      while (k > 0) {
        --k;
        const ContinuousChoice& c = plan.continuous[k];
        if (choice[k] == 0 && vertex_value(c, values, 1) != vertex_value(c, values, 0)) {
          choice[k] = 1;
          advanced = true;
          break;
        }
        choice[k] = 0;
      }
      if (!advanced) break;
    }
    if (timed_out) break;
    std::size_t k = plan.integers.size();
    bool advanced = false;
    while (k > 0) {
      --k;
      if (current[k] < plan.integers[k].upper) {
        current[k] += 1.0;
        advanced = true;
        break;
      }
      current[k] = plan.integers[k].lower;
    }
    if (!advanced) break;
  }

  SolveOutcome& o = result.outcome;
  o.time_spent_seconds = elapsed();
  o.time_limit_seconds = time_limit_seconds;
  if (have_incumbent) {
    const double pb = objective_value(instance, incumbent);
    o.primal_bound = pb;
    o.has_feasible_solution = true;
    result.solution = incumbent;
    if (timed_out) {
      result.status = SolveStatus::timeout_incumbent;
    } else {
      result.status = SolveStatus::optimal;
      o.dual_bound = pb;
      o.solved_to_optimality = true;
    }
  } else {
    result.status = SolveStatus::timeout_nofeas;
    if (!timed_out) {
      o.dual_bound = options.cutoff ? *options.cutoff : sign * kInfinity;
      o.stopped_early_without_zero_gap = true;
    }
  }
  return result;
}

}  // namespace reoptbench
