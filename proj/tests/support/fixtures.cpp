#include "fixtures.hpp"

#include <sys/stat.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "reoptbench/manifest.hpp"
#include "reoptbench/mps.hpp"

namespace fixtures {

using namespace reoptbench;

Instance mixed() {
  Instance in;
  in.name = "mixed";
  in.variables = {
      {"g1", VarKind::general_integer, 0, 10, 3},
      {"g2", VarKind::general_integer, -2, 6, -1},
      {"b1", VarKind::binary, 0, 1, 2},
      {"b2", VarKind::binary, 0, 1, -4},
      {"b3", VarKind::binary, 0, 1, 1},
      {"x1", VarKind::continuous, 0, 8.5, 0.5},
      {"x2", VarKind::continuous, -kInfinity, kInfinity, 0},
  };
  in.rows = {
      {"cap", {{0, 2}, {1, 1}, {2, 3}, {5, 1}}, -kInfinity, 20},
      {"cover", {{2, 1}, {3, 1}, {4, 1}}, 1, kInfinity},
      {"link", {{0, 1}, {5, 1}, {6, -1}}, 4, 4},
      {"range", {{1, 1}, {3, 2}}, 0, 7},
      {"neg", {{0, -1}, {4, 1}}, -kInfinity, -1},
  };
  return in;
}

Instance random_binary(std::mt19937_64& rng, std::size_t n, std::size_t m, Sense sense) {
  std::uniform_int_distribution<int> weight(1, 20);
  std::uniform_int_distribution<int> cost(-10, 10);
  std::bernoulli_distribution present(0.4);
  Instance in;
  in.name = "rand";
  in.sense = sense;
  for (std::size_t j = 0; j < n; ++j) {
    in.variables.push_back({"b" + std::to_string(j + 1), VarKind::binary, 0, 1,
                            static_cast<double>(cost(rng))});
  }
  Row knap{"knap", {}, -kInfinity, 0};
  double total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = weight(rng);
    knap.coefficients.push_back({j, w});
    total += w;
  }
  knap.rhs = std::floor(total / 2);
  in.rows.push_back(knap);
  for (std::size_t i = 0; i < m; ++i) {
    Row r{"c" + std::to_string(i + 1), {}, 1, kInfinity};
    for (std::size_t j = 0; j < n; ++j) {
      if (present(rng)) r.coefficients.push_back({j, 1});
    }
    if (r.coefficients.empty()) r.coefficients.push_back({i % n, 1});
    in.rows.push_back(r);
  }
  return in;
}

Instance infeasible_binary(std::size_t n) {
  Instance in;
  in.name = "infeasible";
  Row lo{"lo", {}, static_cast<double>(n) + 1, kInfinity};
  for (std::size_t j = 0; j < n; ++j) {
    in.variables.push_back({"b" + std::to_string(j + 1), VarKind::binary, 0, 1, 1});
    lo.coefficients.push_back({j, 1});
  }
  in.rows.push_back(lo);
  return in;
}

bool dense_feasible(const Instance& in, const std::vector<double>& x, double feas_tol,
                    double int_tol) {
  const std::size_t n = in.num_variables();
  std::vector<std::vector<double>> a(in.num_rows(), std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < in.num_rows(); ++i) {
    for (const Entry& e : in.rows[i].coefficients) a[i][e.index] += e.value;
  }
  auto within = [&](double v, double lo, double hi) {
    if (std::isfinite(lo) && lo - v > feas_tol * (1 + std::abs(lo))) return false;
    if (std::isfinite(hi) && v - hi > feas_tol * (1 + std::abs(hi))) return false;
    return true;
  };
  for (std::size_t j = 0; j < n; ++j) {
    const Variable& v = in.variables[j];
    if (!within(x[j], v.lower, v.upper)) return false;
    if (v.kind != VarKind::continuous && std::abs(x[j] - std::round(x[j])) > int_tol) return false;
  }
  for (std::size_t i = 0; i < in.num_rows(); ++i) {
    double activity = 0;
    for (std::size_t j = 0; j < n; ++j) activity += a[i][j] * x[j];
    if (!within(activity, in.rows[i].lhs, in.rows[i].rhs)) return false;
  }
  return true;
}

BruteForce brute_force(const Instance& in) {
  const std::size_t n = in.num_variables();
  std::vector<std::size_t> ints;
  std::map<std::size_t, std::pair<double, double>> vertex;  // x index -> (l, u)
  std::map<std::size_t, std::size_t> link;                  // x index -> y index
  for (std::size_t j = 0; j < n; ++j) {
    if (in.variables[j].kind != VarKind::continuous) ints.push_back(j);
  }
  for (const Row& r : in.rows) {
    auto named = [&](const char* prefix) {
      return r.name.rfind(prefix, 0) == 0 && r.name.size() > 2 && std::isdigit(r.name[2]);
    };
    const bool lo = named("lo"), up = named("up");
    if (!lo && !up) continue;
    std::size_t x = n, y = n;
    double coef = 0;
    for (const Entry& e : r.coefficients) {
      if (in.variables[e.index].kind == VarKind::continuous) {
        x = e.index;
      } else {
        y = e.index;
        coef = -e.value;
      }
    }
    if (y < n) link[x] = y;
    (lo ? vertex[x].first : vertex[x].second) = coef;
  }

  BruteForce best;
  std::vector<double> values(n, 0.0);
  for (std::size_t j : ints) values[j] = in.variables[j].upper;
  const double sign = in.sense == Sense::minimize ? 1 : -1;
  while (true) {
    // x choices: bit k picks the upper vertex of the k-th linked column.
    const std::size_t choices = std::size_t{1} << vertex.size();
    for (std::size_t mask = 0; mask < choices; ++mask) {
      std::size_t k = 0;
      for (const auto& [x, lu] : vertex) {
        const auto it = link.find(x);
        const double y = it == link.end() ? 0.0 : values[it->second];
        values[x] = ((mask >> k) & 1 ? lu.second : lu.first) * y;
        ++k;
      }
      ++best.visited;
      if (!dense_feasible(in, values)) continue;
      double obj = in.objective_constant;
      for (std::size_t j = 0; j < n; ++j) obj += in.variables[j].objective * values[j];
      if (!best.optimum || sign * obj < sign * *best.optimum) {
        best.optimum = obj;
        best.argmin = values;
      }
    }
    // Odometer: the first integer variable moves fastest, counting down.
    std::size_t p = 0;
    for (; p < ints.size(); ++p) {
      const std::size_t j = ints[p];
      if (values[j] > in.variables[j].lower) {
        values[j] -= 1;
        break;
      }
      values[j] = in.variables[j].upper;
    }
    if (p == ints.size()) break;
  }
  return best;
}

std::vector<std::size_t> reference_select(std::span<const CandidateRecord> candidates,
                                          std::size_t target, const Band& time_band,
                                          const Band& similarity_band) {
  const bool any_time = time_band.low == -kInfinity && time_band.high == kInfinity;
  const bool any_sim = similarity_band.low <= -1 && similarity_band.high >= 1;
  std::vector<std::size_t> passing;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& t = candidates[k].solve_time_seconds;
    const auto& s = candidates[k].similarity_to_base;
    const bool time_ok = t ? (time_band.low <= *t && *t <= time_band.high) : any_time;
    const bool sim_ok = s ? (similarity_band.low <= *s && *s <= similarity_band.high) : any_sim;
    if (time_ok && sim_ok) passing.push_back(k);
  }
  if (passing.size() > target) passing.resize(target);
  return passing;
}

std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("reoptbench-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_manifest(const std::filesystem::path& dir,
                                     const std::vector<Instance>& instances, double time_limit,
                                     VariationMask mask) {
  std::filesystem::create_directories(dir);
  SeriesManifest m;
  m.series_name = "fixture";
  m.time_limit_seconds = time_limit;
  m.variation_mask = mask;
  m.recipe = "fixture";
  for (std::size_t i = 0; i < instances.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "%02zu.mps", i + 1);
    write_mps_file(dir / name, instances[i]);
    m.instance_files.push_back(name);
  }
  save_manifest(dir / "manifest.json", m);
  return dir / "manifest.json";
}

std::filesystem::path write_script(const std::filesystem::path& path, const std::string& body) {
  {
    std::ofstream out(path);
    out << "#!/bin/sh\n" << body;
  }
  ::chmod(path.c_str(), 0755);
  return path;
}

}  // namespace fixtures
