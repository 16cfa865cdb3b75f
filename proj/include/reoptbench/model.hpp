#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reoptbench {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class VarKind { continuous, binary, general_integer };

std::string_view to_string(Sense sense);
std::string_view to_string(VarKind kind);

inline bool is_integral(VarKind kind) { return kind != VarKind::continuous; }

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInfinity;
  double objective = 0.0;

  bool operator==(const Variable&) const = default;
};

struct Entry {
  std::size_t index = 0;
  double value = 0.0;

  bool operator==(const Entry&) const = default;
};

/// A constraint lhs <= sum(coefficients) <= rhs. Equality rows have lhs == rhs;
/// one-sided rows carry an infinite side.
struct Row {
  std::string name;
  std::vector<Entry> coefficients;
  double lhs = -kInfinity;
  double rhs = kInfinity;

  bool is_equality() const { return lhs == rhs; }
  bool operator==(const Row&) const = default;
};

struct Instance {
  std::string name;
  Sense sense = Sense::minimize;
  double objective_constant = 0.0;
  std::vector<Variable> variables;
  std::vector<Row> rows;

  std::size_t num_variables() const { return variables.size(); }
  std::size_t num_rows() const { return rows.size(); }
  std::vector<double> objective() const;

  bool operator==(const Instance&) const = default;
};

/// Throws StructuralError / InvalidInputError when the instance breaks a data
/// model invariant (unique names, valid indices, ordered bounds and sides,
/// binary domain, no duplicate or zero coefficients, NaN-free data).
void validate(const Instance& instance);

/// Field equality where reals compare by bit pattern (distinguishes -0.0 and
/// equal NaN payloads), the notion used by MPS round trips.
bool bit_equal(const Instance& a, const Instance& b);

/// Integer variables with bounds exactly [0, 1] become binaries. Used on
/// externally supplied MPS files, which only mark integrality.
Instance promote_unit_integers(Instance instance);

struct Solution {
  std::vector<double> values;

  bool operator==(const Solution&) const = default;
};

double objective_value(const Instance& instance, std::span<const double> values);
double objective_value(const Instance& instance, const Solution& solution);

struct FeasTolerances {
  /// Absolute tolerance for bound and row violations, scaled by 1 + |side|.
  double feasibility = 1e-6;
  double integrality = 1e-5;
};

/// Per-category maximum violations (unscaled). `feasible` is decided per
/// entry: a bound or row violation v against side s is tolerated iff
/// v <= feasibility * (1 + |s|).
struct FeasReport {
  bool feasible = true;
  double max_bound_violation = 0.0;
  double max_row_violation = 0.0;
  double max_integrality_violation = 0.0;
  std::string worst_offender;
};

FeasReport check_feasibility(const Instance& instance,
                             std::span<const double> values,
                             const FeasTolerances& tolerances = {});
FeasReport check_feasibility(const Instance& instance, const Solution& solution,
                             const FeasTolerances& tolerances = {});

enum class Component : std::uint8_t {
  LO = 1 << 0,
  UP = 1 << 1,
  OBJ = 1 << 2,
  LHS = 1 << 3,
  RHS = 1 << 4,
  MAT = 1 << 5,
};

class VariationMask {
 public:
  constexpr VariationMask() = default;
  constexpr VariationMask(std::initializer_list<Component> components) {
    for (Component c : components) bits_ |= static_cast<std::uint8_t>(c);
  }

  static VariationMask from_bits(std::uint8_t bits);
  /// Parses names such as {"UP", "LO"}; throws InvalidInputError on unknown names.
  static VariationMask from_names(const std::vector<std::string>& names);

  constexpr bool contains(Component c) const {
    return (bits_ & static_cast<std::uint8_t>(c)) != 0;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  void insert(Component c) { bits_ |= static_cast<std::uint8_t>(c); }
  /// True iff every component of `other` is in this mask.
  constexpr bool covers(VariationMask other) const {
    return (other.bits_ & ~bits_) == 0;
  }

  /// Component names in the fixed order LO, UP, OBJ, LHS, RHS, MAT.
  std::vector<std::string> names() const;
  std::string to_string() const;

  constexpr bool operator==(const VariationMask&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

/// Replacement values for the masked components of an instance. Every present
/// vector is a full replacement (one entry per variable or per row). `matrix`
/// replaces row coefficient lists.
struct VariationDelta {
  VariationMask mask;
  std::optional<std::vector<double>> lower;
  std::optional<std::vector<double>> upper;
  std::optional<std::vector<double>> objective;
  std::optional<std::vector<double>> lhs;
  std::optional<std::vector<double>> rhs;
  std::optional<std::vector<std::vector<Entry>>> matrix;
};

Instance apply_variation(const Instance& base, const VariationDelta& delta);

/// Result of comparing two instances that should belong to one series.
struct StructuralDiff {
  /// Same variable and row counts, names, order, kinds and sense.
  bool same_structure = true;
  std::string mismatch;
  /// Components whose values differ (bit-level comparison).
  VariationMask changed;
  /// Objective constant differs; it has no component of its own.
  bool objective_constant_changed = false;
};

StructuralDiff structural_diff(const Instance& base, const Instance& other);

}  // namespace reoptbench
