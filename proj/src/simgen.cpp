#include "reoptbench/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "reoptbench/error.hpp"
#include "reoptbench/mps.hpp"

namespace reoptbench {

namespace {

constexpr std::pair<Recipe, const char*> kRecipeNames[] = {
    {Recipe::bound_perturb, "bound_perturb"},
    {Recipe::binary_fix, "binary_fix"},
    {Recipe::obj_perturb_rotate, "obj_perturb_rotate"},
    {Recipe::rhs_convex, "rhs_convex"},
    {Recipe::side_perturb, "side_perturb"},
    {Recipe::synthetic_semicontinuous, "synthetic_semicontinuous"},
};

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInputError(message);
}

std::vector<double> lowers(const Instance& instance) {
  std::vector<double> out;
  for (const Variable& v : instance.variables) out.push_back(v.lower);
  return out;
}

std::vector<double> uppers(const Instance& instance) {
  std::vector<double> out;
  for (const Variable& v : instance.variables) out.push_back(v.upper);
  return out;
}

std::vector<std::size_t> finite_rhs_rows(const Instance& instance) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < instance.num_rows(); ++i) {
    if (std::isfinite(instance.rows[i].rhs)) rows.push_back(i);
  }
  return rows;
}

bool has_equality_rows(const Instance& instance) {
  return std::any_of(instance.rows.begin(), instance.rows.end(),
                     [](const Row& r) { return r.is_equality() && std::isfinite(r.rhs); });
}

std::string two_digit(std::size_t index) {
  char buffer[24];
  std::snprintf(buffer, sizeof buffer, "%02zu", index);
  return buffer;
}

std::string format_band(const Band& band) {
  char buffer[96];
  std::snprintf(buffer, sizeof buffer, "[%g, %g]", band.low, band.high);
  return buffer;
}

bool accepts_unknown_time(const Band& band) {
  return band.low <= 0.0 && band.high == kInfinity;
}

bool accepts_unknown_similarity(const Band& band) {
  return band.low <= -1.0 && band.high >= 1.0;
}

std::vector<double> lambda_grid(std::uint64_t count) {
  std::vector<double> lambdas;
  for (std::uint64_t k = 0; k < count; ++k) {
    lambdas.push_back(count == 1 ? 1.0
                                 : static_cast<double>(k) / static_cast<double>(count - 1));
  }
  return lambdas;
}

}  // namespace

std::string_view to_string(Recipe recipe) {
  for (const auto& [r, name] : kRecipeNames) {
    if (r == recipe) return name;
  }
  return "unknown";
}

Recipe recipe_from_string(std::string_view name) {
  for (const auto& [r, n] : kRecipeNames) {
    if (name == n) return r;
  }
  throw InvalidInputError("unknown recipe '" + std::string(name) + "'");
}

VariationMask recipe_mask(Recipe recipe, const Instance* base) {
  switch (recipe) {
    case Recipe::bound_perturb: return {Component::UP};
    case Recipe::binary_fix: return {Component::LO, Component::UP};
    case Recipe::obj_perturb_rotate: return {Component::OBJ};
    case Recipe::side_perturb: return {Component::LHS, Component::RHS};
    case Recipe::rhs_convex:
      if (base && has_equality_rows(*base)) return {Component::LHS, Component::RHS};
      return {Component::RHS};
    case Recipe::synthetic_semicontinuous: return {Component::RHS};
  }
  return {};
}

void validate(const GeneratorSpec& spec) {
  const RecipeParameters& p = spec.parameters;
  require(spec.candidate_count >= 1, "candidate count must be at least 1");
  require(std::isfinite(p.max_relative_change) && p.max_relative_change >= 0 &&
              p.max_relative_change <= 1,
          "max_relative_change must lie in [0, 1]");
  require(p.fraction_low >= 0 && p.fraction_low <= p.fraction_high && p.fraction_high <= 1,
          "binary fix fractions must satisfy 0 <= low <= high <= 1");
  require(std::isfinite(p.relative_noise) && p.relative_noise >= 0,
          "relative_noise must be finite and non-negative");
  require(std::isfinite(p.max_angle_radians) && p.max_angle_radians >= 0,
          "max_angle_radians must be finite and non-negative");
  require(std::isfinite(p.side_relative_change) && p.side_relative_change >= 0,
          "side_relative_change must be finite and non-negative");
  require(std::isfinite(p.rhs_spread) && p.rhs_spread >= 0,
          "rhs_spread must be finite and non-negative");
  require(p.synthetic_variables >= 1 && p.synthetic_rows >= 1,
          "synthetic dimensions must be positive");
}

double similarity(std::span<const double> c, std::span<const double> c_bar) {
  if (c.size() != c_bar.size()) {
    throw StructuralError("similarity of vectors with lengths " + std::to_string(c.size()) +
                          " and " + std::to_string(c_bar.size()));
  }
  double scale_c = 0.0, scale_b = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (std::isnan(c[k]) || std::isnan(c_bar[k]) || std::isinf(c[k]) || std::isinf(c_bar[k])) {
      throw InvalidInputError("similarity of vectors with non-finite entries");
    }
    scale_c = std::max(scale_c, std::abs(c[k]));
    scale_b = std::max(scale_b, std::abs(c_bar[k]));
  }
  if (scale_c == 0.0 || scale_b == 0.0) {
    throw UndefinedSimilarity("similarity is undefined for a zero vector");
  }
  // Scaling by the largest magnitude keeps the squares away from overflow.
  double dot = 0.0, norm_c = 0.0, norm_b = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double x = c[k] / scale_c;
    const double y = c_bar[k] / scale_b;
    dot += x * y;
    norm_c += x * x;
    norm_b += y * y;
  }
  // Rounding can push parallel vectors a few ulps past +-1.
  return std::clamp(dot / (std::sqrt(norm_c * norm_b)), -1.0, 1.0);
}

Instance perturb_bounds(const Instance& base, double max_relative_change, SplitMix64& rng) {
  require(std::isfinite(max_relative_change) && max_relative_change >= 0 &&
              max_relative_change <= 1,
          "max_relative_change must lie in [0, 1]");
  std::vector<double> upper = uppers(base);
  bool eligible = false;
  for (std::size_t j = 0; j < base.num_variables(); ++j) {
    const Variable& v = base.variables[j];
    if (v.kind != VarKind::general_integer || !std::isfinite(v.upper) || v.upper <= 0) continue;
    eligible = true;
    if (!rng.bernoulli(0.5)) continue;
    const double top = std::round((1.0 + max_relative_change) * v.upper);
    if (top >= 0x1p62) throw RecipeInapplicable("upper bound of '" + v.name + "' is too large");
    const auto drawn = static_cast<double>(rng.below_or_equal(static_cast<std::uint64_t>(top)));
    upper[j] = std::max(drawn, v.lower);
  }
  if (!eligible) {
    throw RecipeInapplicable("no general integer variable with a finite positive upper bound");
  }
  VariationDelta delta;
  delta.mask = {Component::UP};
  delta.upper = std::move(upper);
  return apply_variation(base, delta);
}

Instance fix_binaries(const Instance& base, double fraction_low, double fraction_high,
                      SplitMix64& rng) {
  require(fraction_low >= 0 && fraction_low <= fraction_high && fraction_high <= 1,
          "binary fix fractions must satisfy 0 <= low <= high <= 1");
  std::vector<std::size_t> free_binaries;
  for (std::size_t j = 0; j < base.num_variables(); ++j) {
    const Variable& v = base.variables[j];
    if (v.kind == VarKind::binary && v.lower < v.upper) free_binaries.push_back(j);
  }
  if (free_binaries.empty()) throw RecipeInapplicable("no free binary variables");

  const double phi = rng.uniform(fraction_low, fraction_high);
  const auto count = static_cast<std::size_t>(
      std::llround(phi * static_cast<double>(free_binaries.size())));
  std::vector<double> lower = lowers(base);
  std::vector<double> upper = uppers(base);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t pick = t + rng.below_or_equal(free_binaries.size() - 1 - t);
    std::swap(free_binaries[t], free_binaries[pick]);
    const double value = static_cast<double>(rng.below_or_equal(1));
    lower[free_binaries[t]] = value;
    upper[free_binaries[t]] = value;
  }
  VariationDelta delta;
  delta.mask = {Component::LO, Component::UP};
  delta.lower = std::move(lower);
  delta.upper = std::move(upper);
  return apply_variation(base, delta);
}

Instance perturb_objective(const Instance& base, double relative_noise,
                           std::uint64_t rotation_pairs, double max_angle, SplitMix64& rng) {
  require(std::isfinite(relative_noise) && relative_noise >= 0,
          "relative_noise must be finite and non-negative");
  require(std::isfinite(max_angle) && max_angle >= 0, "max_angle must be finite and non-negative");
  std::vector<double> c = base.objective();
  if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) {
    throw RecipeInapplicable("objective is zero");
  }
  if (rotation_pairs > 0 && c.size() < 2) {
    throw RecipeInapplicable("rotations need at least two variables");
  }
  for (double& v : c) v *= rng.uniform(1.0 - relative_noise, 1.0 + relative_noise);
  for (std::uint64_t r = 0; r < rotation_pairs; ++r) {
    const std::size_t i = rng.below_or_equal(c.size() - 1);
    std::size_t j = rng.below_or_equal(c.size() - 2);
    if (j >= i) ++j;
    const double theta = rng.uniform(-max_angle, max_angle);
    const double ci = c[i];
    const double cj = c[j];
    c[i] = std::cos(theta) * ci - std::sin(theta) * cj;
    c[j] = std::sin(theta) * ci + std::cos(theta) * cj;
  }
  VariationDelta delta;
  delta.mask = {Component::OBJ};
  delta.objective = std::move(c);
  return apply_variation(base, delta);
}

Instance rhs_convex_combination(const Instance& base, std::span<const double> rhs_a,
                                std::span<const double> rhs_b, double lambda) {
  require(lambda >= 0 && lambda <= 1, "lambda must lie in [0, 1]");
  const std::vector<std::size_t> rows = finite_rhs_rows(base);
  if (rhs_a.size() != rows.size() || rhs_b.size() != rows.size()) {
    throw StructuralError("right-hand side vectors must have " + std::to_string(rows.size()) +
                          " entries (rows with a finite right-hand side)");
  }
  std::vector<double> lhs, rhs;
  for (const Row& r : base.rows) {
    lhs.push_back(r.lhs);
    rhs.push_back(r.rhs);
  }
  bool moved_lhs = false;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t i = rows[k];
    const double value = lambda * rhs_a[k] + (1.0 - lambda) * rhs_b[k];
    if (base.rows[i].is_equality()) {
      lhs[i] = value;
      moved_lhs = true;
    } else if (value < lhs[i]) {
      throw InvalidInputError("right-hand side of row '" + base.rows[i].name +
                              "' would fall below its left-hand side");
    }
    rhs[i] = value;
  }
  VariationDelta delta;
  delta.mask = {Component::RHS};
  if (moved_lhs) {
    delta.mask.insert(Component::LHS);
    delta.lhs = std::move(lhs);
  }
  delta.rhs = std::move(rhs);
  return apply_variation(base, delta);
}

Instance perturb_sides(const Instance& base, double max_relative_change, SplitMix64& rng) {
  require(std::isfinite(max_relative_change) && max_relative_change >= 0,
          "max_relative_change must be finite and non-negative");
  std::vector<double> lhs, rhs;
  for (const Row& r : base.rows) {
    lhs.push_back(r.lhs);
    rhs.push_back(r.rhs);
  }
  auto eligible = [](double side) { return std::isfinite(side) && side >= 0.0; };
  auto scaled = [&](double side) {
    return side * (1.0 + rng.uniform(-max_relative_change, max_relative_change));
  };
  bool any = false;
  for (std::size_t i = 0; i < base.num_rows(); ++i) {
    if (base.rows[i].is_equality()) {
      if (!eligible(rhs[i])) continue;
      any = true;
      if (rng.bernoulli(0.5)) lhs[i] = rhs[i] = scaled(rhs[i]);
      continue;
    }
    if (eligible(lhs[i])) {
      any = true;
      if (rng.bernoulli(0.5)) lhs[i] = scaled(lhs[i]);
    }
    if (eligible(rhs[i])) {
      any = true;
      if (rng.bernoulli(0.5)) rhs[i] = scaled(rhs[i]);
    }
    if (lhs[i] > rhs[i]) std::swap(lhs[i], rhs[i]);
  }
  if (!any) throw RecipeInapplicable("no finite non-negative row side");
  VariationDelta delta;
  delta.mask = {Component::LHS, Component::RHS};
  delta.lhs = std::move(lhs);
  delta.rhs = std::move(rhs);
  return apply_variation(base, delta);
}

SyntheticInstance gen_synthetic_semicontinuous(std::uint64_t n, std::uint64_t m,
                                               SplitMix64& rng) {
  require(n >= 1 && m >= 1, "synthetic dimensions must be positive");
  std::vector<double> c(n), l(n), u(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    c[j] = rng.uniform(1.0, 10.0);
    const double first = rng.uniform(0.0, 10.0);
    const double second = rng.uniform(0.0, 10.0);
    l[j] = std::min(first, second);
    u[j] = std::max(first, second);
  }
  std::vector<std::vector<Entry>> a(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) {
      if (!rng.bernoulli(0.2)) continue;
      const double value = rng.uniform(-10.0, 10.0);
      if (value != 0.0) a[i].push_back({j, value});
    }
    if (a[i].empty()) {
      const std::uint64_t j = rng.below_or_equal(n - 1);
      const double value = rng.uniform(-10.0, 10.0);
      a[i].push_back({j, value != 0.0 ? value : 1.0});
    }
  }
  std::vector<double> x_ref(n, 0.0);
  for (std::uint64_t j = 0; j < n; ++j) {
    if (rng.bernoulli(0.5)) x_ref[j] = rng.bernoulli(0.5) ? u[j] : l[j];
  }
  std::vector<double> activity(m, 0.0);
  for (std::uint64_t i = 0; i < m; ++i) {
    for (const Entry& e : a[i]) activity[i] += e.value * x_ref[e.index];
  }
  std::vector<double> b_a(m), b_b(m);
  for (std::uint64_t i = 0; i < m; ++i) b_a[i] = activity[i] + rng.uniform(0.0, 5.0);
  for (std::uint64_t i = 0; i < m; ++i) b_b[i] = activity[i] + rng.uniform(0.0, 5.0);

  SyntheticInstance out;
  Instance& inst = out.instance;
  inst.name = "synthetic_semicontinuous";
  for (std::uint64_t j = 0; j < n; ++j) {
    inst.variables.push_back(
        {"x" + std::to_string(j + 1), VarKind::continuous, -kInfinity, kInfinity, c[j]});
  }
  for (std::uint64_t j = 0; j < n; ++j) {
    inst.variables.push_back({"y" + std::to_string(j + 1), VarKind::binary, 0.0, 1.0, 0.0});
  }
  for (std::uint64_t i = 0; i < m; ++i) {
    std::sort(a[i].begin(), a[i].end(),
              [](const Entry& p, const Entry& q) { return p.index < q.index; });
    inst.rows.push_back({"a" + std::to_string(i + 1), a[i], -kInfinity, b_a[i]});
    out.rhs_a.push_back(b_a[i]);
    out.rhs_b.push_back(b_b[i]);
  }
  for (std::uint64_t j = 0; j < n; ++j) {
    const std::size_t y = n + j;
    std::vector<Entry> lo{{j, 1.0}};
    if (l[j] != 0.0) lo.push_back({y, -l[j]});
    std::vector<Entry> up{{j, 1.0}};
    if (u[j] != 0.0) up.push_back({y, -u[j]});
    inst.rows.push_back({"lo" + std::to_string(j + 1), std::move(lo), 0.0, kInfinity});
    inst.rows.push_back({"up" + std::to_string(j + 1), std::move(up), -kInfinity, 0.0});
    out.rhs_a.push_back(0.0);  // only up_j has a finite right-hand side
    out.rhs_b.push_back(0.0);
  }
  validate(inst);
  return out;
}

double time_limit_from_times(std::span<const double> solve_times) {
  if (solve_times.empty()) throw InvalidInputError("no solve times to derive a time limit from");
  std::vector<double> sorted(solve_times.begin(), solve_times.end());
  for (double t : sorted) {
    if (!std::isfinite(t) || t < 0) throw InvalidInputError("solve times must be finite and >= 0");
  }
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double median =
      sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return std::max(10.0, std::ceil(2.0 * median / 10.0) * 10.0);
}

AssembledSeries assemble_series(std::span<const CandidateRecord> candidates, std::size_t target,
                                const Band& time_band, const Band& similarity_band,
                                double fallback_time_limit) {
  require(target >= 1, "target series length must be at least 1");
  AssembledSeries out;
  std::size_t time_rejected = 0, similarity_rejected = 0;
  std::vector<double> times;
  bool all_times_known = true;
  for (std::size_t k = 0; k < candidates.size() && out.selected.size() < target; ++k) {
    const CandidateRecord& c = candidates[k];
    const bool time_ok = c.solve_time_seconds ? time_band.contains(*c.solve_time_seconds)
                                              : accepts_unknown_time(time_band);
    const bool similarity_ok = c.similarity_to_base
                                   ? similarity_band.contains(*c.similarity_to_base)
                                   : accepts_unknown_similarity(similarity_band);
    if (!time_ok) ++time_rejected;
    if (!similarity_ok) ++similarity_rejected;
    if (!time_ok || !similarity_ok) continue;
    out.selected.push_back(k);
    if (c.solve_time_seconds) {
      times.push_back(*c.solve_time_seconds);
    } else {
      all_times_known = false;
    }
  }
  if (out.selected.size() < target) {
    const bool time_worse = time_rejected >= similarity_rejected;
    const std::string band = time_worse ? "time band " + format_band(time_band)
                                        : "similarity band " + format_band(similarity_band);
    throw InsufficientCandidates(
        band + " rejected too many candidates: need " + std::to_string(target) + ", " +
        std::to_string(out.selected.size()) + " of " + std::to_string(candidates.size()) +
        " qualify (" + std::to_string(time_rejected) + " rejected by the time band, " +
        std::to_string(similarity_rejected) + " by the similarity band)");
  }
  out.time_limit_seconds = all_times_known ? time_limit_from_times(times) : fallback_time_limit;
  return out;
}

std::vector<double> varying_vector(const Instance& instance, const Instance& base,
                                   VariationMask mask) {
  if (instance.num_variables() != base.num_variables() || instance.num_rows() != base.num_rows()) {
    throw StructuralError("instance and base differ in shape");
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < base.num_variables(); ++j) {
    if (mask.contains(Component::LO) && std::isfinite(base.variables[j].lower)) {
      out.push_back(instance.variables[j].lower);
    }
  }
  for (std::size_t j = 0; j < base.num_variables(); ++j) {
    if (mask.contains(Component::UP) && std::isfinite(base.variables[j].upper)) {
      out.push_back(instance.variables[j].upper);
    }
  }
  if (mask.contains(Component::OBJ)) {
    for (const Variable& v : instance.variables) out.push_back(v.objective);
  }
  for (std::size_t i = 0; i < base.num_rows(); ++i) {
    if (mask.contains(Component::LHS) && std::isfinite(base.rows[i].lhs)) {
      out.push_back(instance.rows[i].lhs);
    }
  }
  for (std::size_t i = 0; i < base.num_rows(); ++i) {
    if (mask.contains(Component::RHS) && std::isfinite(base.rows[i].rhs)) {
      out.push_back(instance.rows[i].rhs);
    }
  }
  for (double& v : out) {
    if (!std::isfinite(v)) v = 0.0;
  }
  return out;
}

std::vector<Instance> generate_candidates(const GeneratorSpec& spec, const Instance* base,
                                          Instance* synthetic_base) {
  validate(spec);
  const RecipeParameters& p = spec.parameters;
  const std::string_view tag = to_string(spec.recipe);
  std::vector<Instance> out;

  if (spec.recipe == Recipe::synthetic_semicontinuous) {
    SplitMix64 rng = SplitMix64::for_candidate(spec.seed, "synthetic_semicontinuous/base", 0);
    const SyntheticInstance syn =
        gen_synthetic_semicontinuous(p.synthetic_variables, p.synthetic_rows, rng);
    for (double lambda : lambda_grid(spec.candidate_count)) {
      out.push_back(rhs_convex_combination(syn.instance, syn.rhs_a, syn.rhs_b, lambda));
    }
    if (synthetic_base) *synthetic_base = syn.instance;
    return out;
  }

  if (!base) {
    throw InvalidInputError("recipe " + std::string(tag) + " needs a base instance");
  }
  validate(*base);

  if (spec.recipe == Recipe::rhs_convex) {
    const std::vector<std::size_t> rows = finite_rhs_rows(*base);
    if (rows.empty()) {
      throw RecipeInapplicable("recipe rhs_convex does not apply: no row with a finite right-hand side");
    }
    SplitMix64 rng = SplitMix64::for_candidate(spec.seed, "rhs_convex/endpoint", 0);
    std::vector<double> a, b;
    for (std::size_t i : rows) {
      const Row& row = base->rows[i];
      a.push_back(row.rhs);
      double shifted = row.rhs * (1.0 + rng.uniform(-p.rhs_spread, p.rhs_spread));
      if (!row.is_equality()) shifted = std::max(shifted, row.lhs);
      b.push_back(shifted);
    }
    for (double lambda : lambda_grid(spec.candidate_count)) {
      out.push_back(rhs_convex_combination(*base, a, b, lambda));
    }
    return out;
  }

  for (std::uint64_t k = 0; k < spec.candidate_count; ++k) {
    SplitMix64 rng = SplitMix64::for_candidate(spec.seed, tag, k);
    try {
      switch (spec.recipe) {
        case Recipe::bound_perturb:
          out.push_back(perturb_bounds(*base, p.max_relative_change, rng));
          break;
        case Recipe::binary_fix:
          out.push_back(fix_binaries(*base, p.fraction_low, p.fraction_high, rng));
          break;
        case Recipe::obj_perturb_rotate:
          out.push_back(perturb_objective(*base, p.relative_noise, p.rotation_pairs,
                                          p.max_angle_radians, rng));
          break;
        case Recipe::side_perturb:
          out.push_back(perturb_sides(*base, p.side_relative_change, rng));
          break;
        default:
          break;
      }
    } catch (const RecipeInapplicable& e) {
      throw RecipeInapplicable("recipe " + std::string(tag) + " does not apply: " + e.what());
    }
  }
  return out;
}

GeneratedSeries generate_series(const SeriesRequest& request) {
  const GeneratorSpec& spec = request.spec;
  GeneratedSeries out;
  const Instance* base = request.base ? &*request.base : nullptr;
  std::vector<Instance> candidates = generate_candidates(spec, base, &out.base);
  if (spec.recipe != Recipe::synthetic_semicontinuous) out.base = *request.base;
  const VariationMask mask = recipe_mask(spec.recipe, &out.base);

  std::vector<CandidateRecord> records;
  const std::vector<double> base_vector = varying_vector(out.base, out.base, mask);
  for (Instance& candidate : candidates) {
    CandidateRecord record;
    if (request.timer) record.solve_time_seconds = request.timer(candidate);
    try {
      record.similarity_to_base =
          similarity(varying_vector(candidate, out.base, mask), base_vector);
    } catch (const UndefinedSimilarity&) {
    }
    record.instance = std::move(candidate);
    records.push_back(std::move(record));
  }
  const AssembledSeries assembled =
      assemble_series(records, kSeriesLength, request.time_band, request.similarity_band,
                      request.fallback_time_limit_seconds);

  SeriesManifest& manifest = out.manifest;
  manifest.series_name = request.series_name;
  manifest.variation_mask = mask;
  manifest.time_limit_seconds = request.time_limit_seconds.value_or(assembled.time_limit_seconds);
  manifest.seed = spec.seed;
  manifest.base_instance =
      spec.recipe == Recipe::synthetic_semicontinuous ? "synthetic" : request.base_name;
  manifest.recipe = std::string(to_string(spec.recipe));
  const RecipeParameters& p = spec.parameters;
  manifest.parameters = {
      {"candidate_count", static_cast<double>(spec.candidate_count)},
      {"max_relative_change", p.max_relative_change},
      {"fraction_low", p.fraction_low},
      {"fraction_high", p.fraction_high},
      {"relative_noise", p.relative_noise},
      {"rotation_pairs", static_cast<double>(p.rotation_pairs)},
      {"max_angle_radians", p.max_angle_radians},
      {"side_relative_change", p.side_relative_change},
      {"rhs_spread", p.rhs_spread},
      {"synthetic_variables", static_cast<double>(p.synthetic_variables)},
      {"synthetic_rows", static_cast<double>(p.synthetic_rows)},
  };
  for (std::size_t position = 0; position < assembled.selected.size(); ++position) {
    Instance instance = records[assembled.selected[position]].instance;
    instance.name = request.series_name + "_" + two_digit(position + 1);
    out.instances.push_back(std::move(instance));
    manifest.instance_files.push_back(two_digit(position + 1) + ".mps");
  }
  validate(manifest);
  return out;
}

void write_series(const GeneratedSeries& series, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory " + directory.string() + ": " + ec.message());
  for (std::size_t k = 0; k < series.instances.size(); ++k) {
    write_mps_file(directory / series.manifest.instance_files.at(k), series.instances[k]);
  }
  save_manifest(directory / "manifest.json", series.manifest);
}

}  // namespace reoptbench
