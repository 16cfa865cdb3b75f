#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reoptbench/manifest.hpp"
#include "reoptbench/model.hpp"
#include "reoptbench/random.hpp"

namespace reoptbench {

enum class Recipe {
  bound_perturb,
  binary_fix,
  obj_perturb_rotate,
  rhs_convex,
  side_perturb,
  synthetic_semicontinuous,
};

std::string_view to_string(Recipe recipe);
/// Throws InvalidInputError for unknown names.
Recipe recipe_from_string(std::string_view name);

/// Components a recipe may change. rhs_convex also changes LHS when the base
/// has equality rows, since both sides move together.
VariationMask recipe_mask(Recipe recipe, const Instance* base = nullptr);

struct RecipeParameters {
  /// bound_perturb: new upper bounds are drawn from {0, ..., round((1+m)u)}.
  double max_relative_change = 1.0;
  /// binary_fix: fraction of free binaries fixed, drawn from [low, high].
  double fraction_low = 0.15;
  double fraction_high = 0.25;
  /// obj_perturb_rotate
  double relative_noise = 0.05;
  std::uint64_t rotation_pairs = 10;
  double max_angle_radians = 0.1;
  /// side_perturb: sides are scaled by 1 + delta, |delta| <= this value.
  double side_relative_change = 0.7;
  /// rhs_convex on a supplied base: the second endpoint scales each finite
  /// right-hand side by 1 + delta, |delta| <= this value.
  double rhs_spread = 0.5;
  /// synthetic_semicontinuous dimensions.
  std::uint64_t synthetic_variables = 8;
  std::uint64_t synthetic_rows = 6;
};

struct GeneratorSpec {
  Recipe recipe = Recipe::synthetic_semicontinuous;
  RecipeParameters parameters;
  std::uint64_t seed = 0;
  std::uint64_t candidate_count = kSeriesLength;
};

void validate(const GeneratorSpec& spec);

/// Cosine similarity. Throws StructuralError on a length mismatch and
/// UndefinedSimilarity when either vector is zero.
double similarity(std::span<const double> c, std::span<const double> c_bar);

/// General integers with finite positive upper bound u get, with probability
/// 1/2 each, a new upper bound uniform in {0, ..., round((1+m)u)}, raised to
/// the lower bound if needed.
Instance perturb_bounds(const Instance& base, double max_relative_change, SplitMix64& rng);

/// Fixes round(phi * F) of the F free binaries (phi uniform in [low, high]),
/// chosen by a partial Fisher-Yates shuffle, each to a fair random value.
Instance fix_binaries(const Instance& base, double fraction_low, double fraction_high,
                      SplitMix64& rng);

/// Scales each objective coefficient by a factor uniform in [1-noise, 1+noise],
/// then applies `rotation_pairs` Givens rotations on random coordinate pairs
/// with angles uniform in [-max_angle, max_angle].
Instance perturb_objective(const Instance& base, double relative_noise,
                           std::uint64_t rotation_pairs, double max_angle, SplitMix64& rng);

/// Right-hand sides lambda*a + (1-lambda)*b over the rows with a finite
/// right-hand side, in row order. Equality rows keep lhs == rhs.
Instance rhs_convex_combination(const Instance& base, std::span<const double> rhs_a,
                                std::span<const double> rhs_b, double lambda);

/// Each finite non-negative side is, with probability 1/2, scaled by 1 + delta
/// with delta uniform in [-m, m]. An equality row counts as one side. Inverted
/// sides are swapped afterwards.
Instance perturb_sides(const Instance& base, double max_relative_change, SplitMix64& rng);

struct SyntheticInstance {
  Instance instance;
  std::vector<double> rhs_a;
  std::vector<double> rhs_b;
};

/// min c^T x s.t. A x <= b, l_j y_j <= x_j <= u_j y_j, y binary.
///
/// Draw order: for each j, c_j ~ U[1,10], then two U[0,10] values whose min
/// and max are l_j and u_j. Then A row by row, each entry present with
/// probability 0.2 and valued U[-10,10] (an empty row gets one entry in a
/// uniformly chosen column). Then a reference point per j: y_j ~ Bernoulli(1/2)
/// and, if y_j = 1, x_j is l_j or u_j with equal probability. Finally both
/// right-hand sides are A x_ref + U[0,5] per row (all of a, then all of b), so
/// every convex combination stays feasible.
///
/// Variables are x1..xn then y1..yn. Rows are a1..am, then lo_j and up_j per j.
/// rhs_a and rhs_b cover all rows with a finite right-hand side.
SyntheticInstance gen_synthetic_semicontinuous(std::uint64_t n, std::uint64_t m, SplitMix64& rng);

/// Closed interval filter.
struct Band {
  double low = -kInfinity;
  double high = kInfinity;

  bool contains(double value) const { return low <= value && value <= high; }
};

/// Band that accepts any solve time, including an unknown one.
inline constexpr Band kAnyTime{-kInfinity, kInfinity};
/// Band that accepts any similarity, including a not-applicable one.
inline constexpr Band kAnySimilarity{-1.0, 1.0};

struct CandidateRecord {
  Instance instance;
  std::optional<double> solve_time_seconds;
  /// Absent when the varying component is not a vector with a nonzero norm.
  std::optional<double> similarity_to_base;
};

/// max(10, 2 * median rounded up to a multiple of 10).
double time_limit_from_times(std::span<const double> solve_times);

struct AssembledSeries {
  std::vector<std::size_t> selected;  // candidate indices in series order
  double time_limit_seconds = 0.0;
};

/// Keeps the first `target` candidates whose solve time lies in `time_band`
/// and whose similarity lies in `similarity_band`. An unknown time or a
/// not-applicable similarity passes only the corresponding any-band. The time
/// limit follows the selected solve times when all are known and is
/// `fallback_time_limit` otherwise. Throws InsufficientCandidates naming the
/// band that rejected the most candidates.
AssembledSeries assemble_series(std::span<const CandidateRecord> candidates, std::size_t target,
                                const Band& time_band, const Band& similarity_band,
                                double fallback_time_limit);

/// Vector the similarity filter compares: the finite entries of every varying
/// component, in the order LO, UP, OBJ, LHS, RHS.
std::vector<double> varying_vector(const Instance& instance, const Instance& base,
                                   VariationMask mask);

/// Measures a candidate; returns its solve time or nothing when unknown.
using CandidateTimer = std::function<std::optional<double>(const Instance&)>;

struct SeriesRequest {
  GeneratorSpec spec;
  /// Required for every recipe except synthetic_semicontinuous.
  std::optional<Instance> base;
  std::string base_name = "synthetic";
  std::string series_name = "series";
  Band time_band = kAnyTime;
  Band similarity_band = kAnySimilarity;
  /// Overrides the time limit derived from candidate solve times.
  std::optional<double> time_limit_seconds;
  double fallback_time_limit_seconds = 60.0;
  CandidateTimer timer;
};

struct GeneratedSeries {
  SeriesManifest manifest;
  Instance base;
  std::vector<Instance> instances;
};

/// Candidate instances in generation order, each drawn from its own stream
/// SplitMix64::for_candidate(seed, recipe name, index).
std::vector<Instance> generate_candidates(const GeneratorSpec& spec, const Instance* base,
                                          Instance* synthetic_base = nullptr);

GeneratedSeries generate_series(const SeriesRequest& request);

/// Writes 01.mps ... NN.mps and manifest.json into `directory`.
void write_series(const GeneratedSeries& series, const std::filesystem::path& directory);

}  // namespace reoptbench
