#include "reoptbench/solution_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "reoptbench/error.hpp"

namespace reoptbench {

Solution parse_solution(std::string_view text, const Instance& instance) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t j = 0; j < instance.num_variables(); ++j) {
    index.emplace(instance.variables[j].name, j);
  }
  Solution solution;
  solution.values.assign(instance.num_variables(), 0.0);
  std::vector<char> seen(instance.num_variables(), 0);

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string name, value_text, extra;
    if (!(fields >> name) || name.front() == '#') continue;
    if (!(fields >> value_text) || (fields >> extra)) {
      throw InvalidInputError("solution line " + std::to_string(line_no) +
                              ": expected '<name> <value>'");
    }
    auto it = index.find(name);
    if (it == index.end()) {
      throw InvalidInputError("solution line " + std::to_string(line_no) +
                              ": unknown variable '" + name + "'");
    }
    if (seen[it->second]) {
      throw InvalidInputError("solution line " + std::to_string(line_no) +
                              ": duplicate value for '" + name + "'");
    }
    double value = 0.0;
    const char* first = value_text.data();
    const char* last = first + value_text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw InvalidInputError("solution line " + std::to_string(line_no) +
                              ": invalid value '" + value_text + "'");
    }
    seen[it->second] = 1;
    solution.values[it->second] = value;
  }
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (!seen[j]) {
      throw InvalidInputError("solution is missing variable '" + instance.variables[j].name +
                              "'");
    }
  }
  return solution;
}

std::string format_solution(const Instance& instance, const Solution& solution) {
  if (solution.values.size() != instance.num_variables()) {
    throw StructuralError("solution length does not match instance");
  }
  std::string out;
  char buf[40];
  for (std::size_t j = 0; j < solution.values.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", solution.values[j]);
    out += instance.variables[j].name;
    out += ' ';
    out += buf;
    out += '\n';
  }
  return out;
}

Solution read_solution_file(const std::filesystem::path& path, const Instance& instance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open solution file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_solution(buffer.str(), instance);
}

void write_solution_file(const std::filesystem::path& path, const Instance& instance,
                         const Solution& solution) {
  const std::string text = format_solution(instance, solution);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write solution file '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing solution file '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

}  // namespace reoptbench
