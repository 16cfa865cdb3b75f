#include "reoptbench/manifest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reoptbench/error.hpp"

namespace reoptbench {

using nlohmann::json;

std::filesystem::path SeriesManifest::instance_path(std::size_t index_one_based) const {
  if (index_one_based == 0 || index_one_based > instance_files.size()) {
    throw StructuralError("instance index " + std::to_string(index_one_based) +
                          " outside manifest of " + std::to_string(instance_files.size()));
  }
  std::filesystem::path p = instance_files[index_one_based - 1];
  return p.is_absolute() ? p : directory / p;
}

void validate(const SeriesManifest& manifest, std::size_t expected_count) {
  const std::size_t n = manifest.instance_files.size();
  if (n == 0 || (expected_count != 0 && n != expected_count)) {
    throw StructuralError("manifest '" + manifest.series_name + "' lists " + std::to_string(n) +
                          " instances" +
                          (expected_count ? ", expected " + std::to_string(expected_count) : ""));
  }
  if (!(manifest.time_limit_seconds > 0.0) || !std::isfinite(manifest.time_limit_seconds)) {
    throw InvalidInputError("manifest time limit must be positive and finite");
  }
  if (manifest.variation_mask.empty()) {
    throw InvalidInputError("manifest variation mask is empty");
  }
}

std::string manifest_to_json(const SeriesManifest& m) {
  json j;
  j["series_name"] = m.series_name;
  j["instance_files"] = m.instance_files;
  j["variation_mask"] = m.variation_mask.names();
  j["time_limit_seconds"] = m.time_limit_seconds;
  j["seed"] = m.seed;
  j["base_instance"] = m.base_instance;
  json generator;
  generator["recipe"] = m.recipe;
  generator["parameters"] = json::object();
  for (const auto& [k, v] : m.parameters) generator["parameters"][k] = v;
  j["generator"] = generator;
  return j.dump(2) + "\n";
}

SeriesManifest manifest_from_json(const std::string& text) {
  SeriesManifest m;
  try {
    const json j = json::parse(text);
    m.series_name = j.at("series_name").get<std::string>();
    m.instance_files = j.at("instance_files").get<std::vector<std::string>>();
    m.variation_mask =
        VariationMask::from_names(j.at("variation_mask").get<std::vector<std::string>>());
    m.time_limit_seconds = j.at("time_limit_seconds").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.base_instance = j.at("base_instance").get<std::string>();
    if (j.contains("generator")) {
      const json& g = j.at("generator");
      m.recipe = g.value("recipe", "");
      if (g.contains("parameters")) {
        for (const auto& [k, v] : g.at("parameters").items()) m.parameters[k] = v.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("malformed manifest: ") + e.what());
  }
  validate(m, 0);
  return m;
}

SeriesManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  SeriesManifest m = manifest_from_json(buffer.str());
  m.directory = std::filesystem::absolute(path).parent_path();
  return m;
}

void save_manifest(const std::filesystem::path& path, const SeriesManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest '" + path.string() + "'");
  out << manifest_to_json(manifest);
  out.flush();
  if (!out) throw IoError("failed writing manifest '" + path.string() + "'");
}

}  // namespace reoptbench
