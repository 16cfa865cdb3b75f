#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "reoptbench/model.hpp"

namespace reoptbench {

/// Solution files hold one `<variable name> <value>` pair per line. Blank
/// lines and lines starting with '#' are skipped. Every variable of the
/// instance must appear exactly once; unknown names are errors.
Solution parse_solution(std::string_view text, const Instance& instance);
std::string format_solution(const Instance& instance, const Solution& solution);

Solution read_solution_file(const std::filesystem::path& path, const Instance& instance);
/// Writes to a temporary sibling and renames, so readers never observe a
/// partially written file.
void write_solution_file(const std::filesystem::path& path, const Instance& instance,
                         const Solution& solution);

}  // namespace reoptbench
