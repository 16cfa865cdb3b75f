#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "reoptbench/model.hpp"
#include "reoptbench/simgen.hpp"

namespace fixtures {

/// Two general integers, three binaries, two continuous columns; a mix of
/// <=, >= and equality rows with non-negative sides plus one negative side.
reoptbench::Instance mixed();

/// Only binaries, n of them, with a knapsack row and m random cover rows.
/// Drawn from std::mt19937_64 so it shares nothing with the library's RNG.
reoptbench::Instance random_binary(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                   reoptbench::Sense sense);

/// An instance with `n` binaries whose rows cannot all hold.
reoptbench::Instance infeasible_binary(std::size_t n);

/// Dense re-evaluation of every bound, row and integrality condition. Uses
/// the same scaled tolerance rule as the library, written independently.
bool dense_feasible(const reoptbench::Instance& instance, const std::vector<double>& x,
                    double feas_tol = 1e-6, double int_tol = 1e-5);

struct BruteForce {
  std::optional<double> optimum;
  std::vector<double> argmin;
  std::uint64_t visited = 0;
};

/// Enumerates every integer assignment with the last variable slowest and
/// values counted downward (the reverse of the library's order). Continuous
/// columns linked to a binary take the vertex values l*y and u*y; the link is
/// read off the synthetic generator's row names (loJ, upJ).
BruteForce brute_force(const reoptbench::Instance& instance);

/// Filter-then-truncate reimplementation of series assembly.
std::vector<std::size_t> reference_select(std::span<const reoptbench::CandidateRecord> candidates,
                                          std::size_t target, const reoptbench::Band& time_band,
                                          const reoptbench::Band& similarity_band);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

/// Writes `instances` as NN.mps plus a manifest and returns the manifest path.
std::filesystem::path write_manifest(const std::filesystem::path& dir,
                                     const std::vector<reoptbench::Instance>& instances,
                                     double time_limit, reoptbench::VariationMask mask);

/// Writes an executable /bin/sh script.
std::filesystem::path write_script(const std::filesystem::path& path, const std::string& body);

}  // namespace fixtures
