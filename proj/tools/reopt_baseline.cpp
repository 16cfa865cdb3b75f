// reopt-baseline: reoptimizing solver speaking the harness event protocol.
//
//   reopt-baseline --manifest <path> [--backend oracle|exec:<command>] [--solution-dir <dir>]
//
// Events go to standard output. Solutions are written to --solution-dir, or to
// $REOPTBENCH_SOLUTION_DIR when the flag is absent.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "reoptbench/error.hpp"
#include "reoptbench/manifest.hpp"
#include "reoptbench/reopt.hpp"

namespace rb = reoptbench;

int main(int argc, char** argv) {
  CLI::App app{"Reoptimizing baseline solver"};
  std::string manifest_path;
  std::string backend_name = "oracle";
  std::string solution_dir;
  app.add_option("--manifest", manifest_path, "Series manifest")->required();
  app.add_option("--backend", backend_name, "oracle, or exec:<command> for an external solver");
  app.add_option("--solution-dir", solution_dir, "Where solutions are written");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (solution_dir.empty()) {
    const char* env = std::getenv("REOPTBENCH_SOLUTION_DIR");
    solution_dir = env ? env : "solutions";
  }

  try {
    const rb::SeriesManifest manifest = rb::load_manifest(manifest_path);
    std::unique_ptr<rb::Backend> backend;
    if (backend_name.rfind("exec:", 0) == 0) {
      std::istringstream words(backend_name.substr(5));
      std::vector<std::string> command;
      for (std::string w; words >> w;) command.push_back(w);
      backend = std::make_unique<rb::ExecBackend>(
          command, std::filesystem::path(solution_dir) / "backend-work");
    } else if (backend_name == "oracle") {
      backend = std::make_unique<rb::OracleBackend>();
    } else {
      std::cerr << "unknown backend '" << backend_name << "'\n";
      return 1;
    }
    rb::serve_protocol(manifest, *backend, std::cout, solution_dir);
  } catch (const rb::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const rb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
