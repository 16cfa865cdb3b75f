#include "reoptbench/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "reoptbench/error.hpp"

namespace reoptbench {

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(std::span<const Entry> a, std::span<const Entry> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].index != b[k].index || !same_bits(a[k].value, b[k].value)) return false;
  }
  return true;
}

void require_length(const Instance& instance, std::size_t length) {
  if (length != instance.num_variables()) {
    throw StructuralError("solution has " + std::to_string(length) +
                          " values, instance '" + instance.name + "' has " +
                          std::to_string(instance.num_variables()) + " variables");
  }
}

constexpr std::pair<Component, const char*> kComponentNames[] = {
    {Component::LO, "LO"},   {Component::UP, "UP"},   {Component::OBJ, "OBJ"},
    {Component::LHS, "LHS"}, {Component::RHS, "RHS"}, {Component::MAT, "MAT"},
};

}  // namespace

std::string_view to_string(Sense sense) {
  return sense == Sense::minimize ? "minimize" : "maximize";
}

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::continuous: return "continuous";
    case VarKind::binary: return "binary";
    case VarKind::general_integer: return "general_integer";
  }
  return "?";
}

std::vector<double> Instance::objective() const {
  std::vector<double> c;
  c.reserve(variables.size());
  for (const auto& v : variables) c.push_back(v.objective);
  return c;
}

void validate(const Instance& instance) {
  std::unordered_set<std::string_view> names;
  for (const auto& v : instance.variables) {
    if (!names.insert(v.name).second) {
      throw StructuralError("duplicate variable name '" + v.name + "'");
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.objective)) {
      throw InvalidInputError("variable '" + v.name + "' has NaN or infinite data");
    }
    if (v.lower > v.upper) {
      throw InvalidInputError("variable '" + v.name + "' has lower bound above upper bound");
    }
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw InvalidInputError("binary variable '" + v.name + "' has bounds outside [0, 1]");
    }
  }
  names.clear();
  std::vector<char> seen(instance.num_variables(), 0);
  for (const auto& r : instance.rows) {
    if (!names.insert(r.name).second) {
      throw StructuralError("duplicate row name '" + r.name + "'");
    }
    if (std::isnan(r.lhs) || std::isnan(r.rhs) || r.lhs > r.rhs) {
      throw InvalidInputError("row '" + r.name + "' has invalid sides");
    }
    for (const auto& e : r.coefficients) {
      if (e.index >= instance.num_variables()) {
        throw StructuralError("row '" + r.name + "' references variable index " +
                              std::to_string(e.index));
      }
      if (seen[e.index]) {
        throw StructuralError("row '" + r.name + "' has a duplicate entry for '" +
                              instance.variables[e.index].name + "'");
      }
      if (e.value == 0.0 || !std::isfinite(e.value)) {
        throw InvalidInputError("row '" + r.name + "' stores a zero or non-finite coefficient");
      }
      seen[e.index] = 1;
    }
    for (const auto& e : r.coefficients) seen[e.index] = 0;
  }
  if (!std::isfinite(instance.objective_constant)) {
    throw InvalidInputError("objective constant must be finite");
  }
}

bool bit_equal(const Instance& a, const Instance& b) {
  if (a.name != b.name || a.sense != b.sense ||
      !same_bits(a.objective_constant, b.objective_constant) ||
      a.variables.size() != b.variables.size() || a.rows.size() != b.rows.size()) {
    return false;
  }
  for (std::size_t j = 0; j < a.variables.size(); ++j) {
    const auto& x = a.variables[j];
    const auto& y = b.variables[j];
    if (x.name != y.name || x.kind != y.kind || !same_bits(x.lower, y.lower) ||
        !same_bits(x.upper, y.upper) || !same_bits(x.objective, y.objective)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.name != y.name || !same_bits(x.lhs, y.lhs) || !same_bits(x.rhs, y.rhs) ||
        !same_bits(x.coefficients, y.coefficients)) {
      return false;
    }
  }
  return true;
}

Instance promote_unit_integers(Instance instance) {
  for (auto& v : instance.variables) {
    if (v.kind == VarKind::general_integer && v.lower == 0.0 && v.upper == 1.0) {
      v.kind = VarKind::binary;
    }
  }
  return instance;
}

double objective_value(const Instance& instance, std::span<const double> values) {
  require_length(instance, values.size());
  double total = instance.objective_constant;
  for (std::size_t j = 0; j < values.size(); ++j) {
    total += instance.variables[j].objective * values[j];
  }
  return total;
}

double objective_value(const Instance& instance, const Solution& solution) {
  return objective_value(instance, std::span<const double>(solution.values));
}

FeasReport check_feasibility(const Instance& instance, std::span<const double> values,
                             const FeasTolerances& tol) {
  require_length(instance, values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (std::isnan(values[j])) {
      throw InvalidInputError("solution value for '" + instance.variables[j].name + "' is NaN");
    }
    if (std::isinf(values[j])) {
      throw InvalidInputError("solution value for '" + instance.variables[j].name +
                              "' is infinite");
    }
  }

  FeasReport report;
  // Largest violation relative to its own tolerance decides the worst offender.
  double worst_ratio = 0.0;
  auto record = [&](double violation, double allowed, double& category_max,
                    const std::string& name) {
    if (violation <= 0.0) return;
    category_max = std::max(category_max, violation);
    if (violation > allowed) report.feasible = false;
    const double ratio = violation / allowed;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      report.worst_offender = name;
    }
  };

  for (std::size_t j = 0; j < values.size(); ++j) {
    const auto& v = instance.variables[j];
    const double x = values[j];
    if (std::isfinite(v.lower)) {
      record(v.lower - x, tol.feasibility * (1.0 + std::abs(v.lower)),
             report.max_bound_violation, v.name);
    }
    if (std::isfinite(v.upper)) {
      record(x - v.upper, tol.feasibility * (1.0 + std::abs(v.upper)),
             report.max_bound_violation, v.name);
    }
    if (is_integral(v.kind)) {
      record(std::abs(x - std::round(x)), tol.integrality,
             report.max_integrality_violation, v.name);
    }
  }

  for (const auto& r : instance.rows) {
    double activity = 0.0;
    for (const auto& e : r.coefficients) activity += e.value * values[e.index];
    if (std::isfinite(r.lhs)) {
      record(r.lhs - activity, tol.feasibility * (1.0 + std::abs(r.lhs)),
             report.max_row_violation, r.name);
    }
    if (std::isfinite(r.rhs)) {
      record(activity - r.rhs, tol.feasibility * (1.0 + std::abs(r.rhs)),
             report.max_row_violation, r.name);
    }
  }
  return report;
}

FeasReport check_feasibility(const Instance& instance, const Solution& solution,
                             const FeasTolerances& tolerances) {
  return check_feasibility(instance, std::span<const double>(solution.values), tolerances);
}

VariationMask VariationMask::from_bits(std::uint8_t bits) {
  VariationMask mask;
  for (const auto& [component, name] : kComponentNames) {
    if (bits & static_cast<std::uint8_t>(component)) mask.insert(component);
  }
  return mask;
}

VariationMask VariationMask::from_names(const std::vector<std::string>& names) {
  VariationMask mask;
  for (const auto& n : names) {
    auto it = std::find_if(std::begin(kComponentNames), std::end(kComponentNames),
                           [&](const auto& p) { return n == p.second; });
    if (it == std::end(kComponentNames)) {
      throw InvalidInputError("unknown variation component '" + n + "'");
    }
    mask.insert(it->first);
  }
  return mask;
}

std::vector<std::string> VariationMask::names() const {
  std::vector<std::string> out;
  for (const auto& [component, name] : kComponentNames) {
    if (contains(component)) out.emplace_back(name);
  }
  return out;
}

std::string VariationMask::to_string() const {
  std::string out;
  for (const auto& n : names()) {
    if (!out.empty()) out += '|';
    out += n;
  }
  return out.empty() ? "-" : out;
}

Instance apply_variation(const Instance& base, const VariationDelta& delta) {
  const std::size_t n = base.num_variables();
  const std::size_t m = base.num_rows();

  auto check = [&](bool present, Component c, std::size_t got, std::size_t want,
                   const char* what) {
    if (!present) return;
    if (!delta.mask.contains(c)) {
      throw ContractViolation(std::string("delta replaces ") + what +
                              " but its mask is " + delta.mask.to_string());
    }
    if (got != want) {
      throw StructuralError(std::string("delta ") + what + " has length " +
                            std::to_string(got) + ", expected " + std::to_string(want));
    }
  };
  check(delta.lower.has_value(), Component::LO, delta.lower ? delta.lower->size() : 0, n,
        "lower bounds");
  check(delta.upper.has_value(), Component::UP, delta.upper ? delta.upper->size() : 0, n,
        "upper bounds");
  check(delta.objective.has_value(), Component::OBJ,
        delta.objective ? delta.objective->size() : 0, n, "objective");
  check(delta.lhs.has_value(), Component::LHS, delta.lhs ? delta.lhs->size() : 0, m,
        "left-hand sides");
  check(delta.rhs.has_value(), Component::RHS, delta.rhs ? delta.rhs->size() : 0, m,
        "right-hand sides");
  check(delta.matrix.has_value(), Component::MAT, delta.matrix ? delta.matrix->size() : 0,
        m, "matrix rows");

  Instance out = base;
  for (std::size_t j = 0; j < n; ++j) {
    auto& v = out.variables[j];
    if (delta.lower) v.lower = (*delta.lower)[j];
    if (delta.upper) v.upper = (*delta.upper)[j];
    if (delta.objective) v.objective = (*delta.objective)[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = out.rows[i];
    if (delta.lhs) r.lhs = (*delta.lhs)[i];
    if (delta.rhs) r.rhs = (*delta.rhs)[i];
    if (delta.matrix) r.coefficients = (*delta.matrix)[i];
  }
  validate(out);
  return out;
}

StructuralDiff structural_diff(const Instance& base, const Instance& other) {
  StructuralDiff diff;
  auto fail = [&](std::string why) {
    diff.same_structure = false;
    diff.mismatch = std::move(why);
    return diff;
  };
  if (base.sense != other.sense) return fail("objective sense differs");
  if (base.num_variables() != other.num_variables()) return fail("variable count differs");
  if (base.num_rows() != other.num_rows()) return fail("row count differs");

  for (std::size_t j = 0; j < base.num_variables(); ++j) {
    const auto& a = base.variables[j];
    const auto& b = other.variables[j];
    if (a.name != b.name) return fail("variable " + std::to_string(j) + " renamed");
    if (a.kind != b.kind) return fail("variable '" + a.name + "' changed kind");
    if (!same_bits(a.lower, b.lower)) diff.changed.insert(Component::LO);
    if (!same_bits(a.upper, b.upper)) diff.changed.insert(Component::UP);
    if (!same_bits(a.objective, b.objective)) diff.changed.insert(Component::OBJ);
  }
  for (std::size_t i = 0; i < base.num_rows(); ++i) {
    const auto& a = base.rows[i];
    const auto& b = other.rows[i];
    if (a.name != b.name) return fail("row " + std::to_string(i) + " renamed");
    if (!same_bits(a.lhs, b.lhs)) diff.changed.insert(Component::LHS);
    if (!same_bits(a.rhs, b.rhs)) diff.changed.insert(Component::RHS);
    if (!same_bits(a.coefficients, b.coefficients)) diff.changed.insert(Component::MAT);
  }
  diff.objective_constant_changed =
      !same_bits(base.objective_constant, other.objective_constant);
  return diff;
}

}  // namespace reoptbench
