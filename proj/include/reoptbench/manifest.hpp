#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "reoptbench/model.hpp"

namespace reoptbench {

inline constexpr std::size_t kSeriesLength = 50;

/// Description of one instance series, persisted as `manifest.json`.
///
/// JSON fields: series_name, instance_files, variation_mask (list of component
/// names), time_limit_seconds, seed, base_instance, and a `generator` object
/// holding the recipe name and its numeric parameters. Relative instance paths
/// resolve against the manifest's directory.
struct SeriesManifest {
  std::string series_name;
  std::vector<std::string> instance_files;
  VariationMask variation_mask;
  double time_limit_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string base_instance = "synthetic";

  std::string recipe;
  std::map<std::string, double> parameters;

  /// Directory the manifest was loaded from; not serialized.
  std::filesystem::path directory;

  std::filesystem::path instance_path(std::size_t index_one_based) const;
};

/// Checks the series contract. `expected_count` of 0 accepts any non-zero count.
void validate(const SeriesManifest& manifest, std::size_t expected_count = kSeriesLength);

std::string manifest_to_json(const SeriesManifest& manifest);
SeriesManifest manifest_from_json(const std::string& text);

SeriesManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const SeriesManifest& manifest);

}  // namespace reoptbench
