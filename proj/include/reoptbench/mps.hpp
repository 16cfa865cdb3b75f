#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "reoptbench/model.hpp"

namespace reoptbench {

struct MpsDialect {
  enum class Mode { free, fixed };

  Mode mode = Mode::free;
  /// When false, an OBJSENSE section is parsed but the instance stays a
  /// minimization.
  bool objective_sense_section_honored = true;

  static MpsDialect free_format() { return {}; }
  static MpsDialect fixed_format() { return {Mode::fixed, true}; }
};

/// Non-fatal observations made while reading (extra objective rows, UP bounds
/// that moved a default lower bound to -inf, ignored RHS sets, ...).
struct MpsWarning {
  std::size_t line = 0;
  std::string message;
};

/// Reads NAME, OBJSENSE, ROWS, COLUMNS, RHS, RANGES, BOUNDS and ENDATA.
///
/// Variable and row order follow first appearance in the file. Integer kind
/// comes from MARKER INTORG/INTEND blocks and UI/LI bounds; only the BV bound
/// produces a binary. Values of magnitude >= 1e30 and the literals inf/infinity
/// denote infinity. Every failure is a ParseError carrying line and column.
Instance parse_mps(std::string_view text, const MpsDialect& dialect = {},
                   std::vector<MpsWarning>* warnings = nullptr);

/// Serializes with 17 significant digits so that parse_mps(write_mps(i)) is
/// bit-equal to i. Throws SerializationError for names the dialect cannot
/// carry, and for two-sided rows whose range cannot be encoded exactly.
std::string write_mps(const Instance& instance, const MpsDialect& dialect = {});

Instance read_mps_file(const std::filesystem::path& path, const MpsDialect& dialect = {},
                       std::vector<MpsWarning>* warnings = nullptr);
void write_mps_file(const std::filesystem::path& path, const Instance& instance,
                    const MpsDialect& dialect = {});

}  // namespace reoptbench
