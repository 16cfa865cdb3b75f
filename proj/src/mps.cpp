#include "reoptbench/mps.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "reoptbench/error.hpp"

namespace reoptbench {

namespace {

constexpr double kMpsInfinity = 1e30;

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<Token> split_free(std::string_view line, std::size_t offset = 0) {
  std::vector<Token> out;
  std::size_t i = offset;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

Token fixed_field(std::string_view line, std::size_t begin, std::size_t end) {
  if (begin >= line.size()) return {std::string_view{}, begin + 1};
  std::string_view raw = line.substr(begin, std::min(end, line.size()) - begin);
  std::size_t lead = 0;
  while (lead < raw.size() && is_space(raw[lead])) ++lead;
  return {trim(raw), begin + lead + 1};
}

// Fields 3 to 6 of a fixed-format data line: row, value, row, value. Row
// fields are positional so names may contain spaces; values are read as the
// first token from their start column.
std::vector<Token> fixed_pairs(std::string_view line) {
  std::vector<Token> out{fixed_field(line, 14, 22)};
  const auto first = split_free(line, 24);
  if (first.empty()) return out;
  out.push_back(first[0]);
  // Long values (the writer emits 17 digits) may run past column 36.
  if (first[0].column + first[0].text.size() > 40) {
    out.insert(out.end(), first.begin() + 1, first.end());
    return out;
  }
  const Token second_row = fixed_field(line, 39, 47);
  if (second_row.text.empty()) return out;
  out.push_back(second_row);
  const auto second = split_free(line, 49);
  if (!second.empty()) out.push_back(second[0]);
  return out;
}

enum class Section { none, name, objsense, rows, columns, rhs, ranges, bounds, endata };

enum class RowType { N, L, G, E };

struct RowInfo {
  RowType type = RowType::L;
  std::size_t index = 0;  // constraint index, or N-row ordinal
  double side = 0.0;
  bool side_set = false;
  std::optional<double> range;
};

struct VarInfo {
  bool lower_explicit = false;
  std::size_t last_bound_line = 0;
};

std::string upper_copy(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Reader {
 public:
  Reader(std::string_view text, const MpsDialect& dialect, std::vector<MpsWarning>* warnings)
      : text_(text), dialect_(dialect), warnings_(warnings) {}

  Instance run() {
    std::size_t pos = 0;
    while (pos <= text_.size() && section_ != Section::endata) {
      std::size_t eol = text_.find('\n', pos);
      if (eol == std::string_view::npos) eol = text_.size();
      std::string_view line = text_.substr(pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no_;
      process_line(line);
      if (eol == text_.size()) break;
      pos = eol + 1;
      if (pos == text_.size()) break;  // trailing newline
    }
    if (section_ != Section::endata) {
      throw ParseError(line_no_ + 1, 1, "missing ENDATA");
    }
    finalize();
    return std::move(instance_);
  }

 private:
  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw ParseError(line_no_, column, message);
  }
  [[noreturn]] void fail(const Token& token, const std::string& message) const {
    fail(token.column, message);
  }

  void warn(std::string message) {
    if (warnings_) warnings_->push_back({line_no_, std::move(message)});
  }

  double number(const Token& token) const {
    std::string_view s = token.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || std::isnan(value)) {
      // from_chars reports overflow for literals such as 1e400; treat as infinity.
      if (ec == std::errc::result_out_of_range && ptr == s.data() + s.size()) {
        return s.front() == '-' ? -kInfinity : kInfinity;
      }
      fail(token, "invalid number '" + std::string(token.text) + "'");
    }
    if (value >= kMpsInfinity) return kInfinity;
    if (value <= -kMpsInfinity) return -kInfinity;
    return value;
  }

  void process_line(std::string_view line) {
    if (trim(line).empty() || line.front() == '*') return;
    if (!is_space(line.front())) {
      header(line);
      return;
    }
    switch (section_) {
      case Section::none:
      case Section::name:
        fail(1, "data line outside of a section");
      case Section::objsense: objsense_line(split_free(line)); break;
      case Section::rows: rows_line(line); break;
      case Section::columns: columns_line(line); break;
      case Section::rhs: rhs_line(line, false); break;
      case Section::ranges: rhs_line(line, true); break;
      case Section::bounds: bounds_line(line); break;
      case Section::endata: break;
    }
  }

  void header(std::string_view line) {
    auto tokens = split_free(line);
    const std::string key = upper_copy(tokens.front().text);
    auto require_after = [&](Section earliest, const char* what) {
      if (section_ < earliest) fail(1, std::string(what) + " section out of order");
    };
    if (key == "NAME") {
      if (section_ != Section::none) fail(1, "NAME must be the first section");
      section_ = Section::name;
      instance_.name = std::string(trim(line.substr(tokens.front().text.size())));
    } else if (key == "OBJSENSE" || key == "OBJSENCE") {
      if (section_ > Section::objsense) fail(1, "OBJSENSE must precede ROWS");
      section_ = Section::objsense;
      if (tokens.size() > 1) objsense_line({tokens.begin() + 1, tokens.end()});
    } else if (key == "ROWS") {
      if (section_ >= Section::rows) fail(1, "duplicate or misplaced ROWS section");
      section_ = Section::rows;
    } else if (key == "COLUMNS") {
      require_after(Section::rows, "COLUMNS");
      if (section_ >= Section::columns) fail(1, "duplicate or misplaced COLUMNS section");
      section_ = Section::columns;
    } else if (key == "RHS") {
      require_after(Section::columns, "RHS");
      close_integer_block();
      section_ = Section::rhs;
    } else if (key == "RANGES") {
      require_after(Section::columns, "RANGES");
      close_integer_block();
      section_ = Section::ranges;
    } else if (key == "BOUNDS") {
      require_after(Section::columns, "BOUNDS");
      close_integer_block();
      section_ = Section::bounds;
    } else if (key == "ENDATA") {
      require_after(Section::rows, "ENDATA");
      close_integer_block();
      section_ = Section::endata;
    } else {
      fail(1, "unknown section '" + std::string(tokens.front().text) + "'");
    }
  }

  void close_integer_block() {
    if (in_integer_block_) {
      warn("INTORG marker without matching INTEND");
      in_integer_block_ = false;
    }
  }

  void objsense_line(const std::vector<Token>& tokens) {
    if (tokens.size() != 1) fail(tokens.empty() ? 1 : tokens[0].column, "expected MIN or MAX");
    const std::string s = upper_copy(tokens[0].text);
    Sense sense;
    if (s == "MAX" || s == "MAXIMIZE") {
      sense = Sense::maximize;
    } else if (s == "MIN" || s == "MINIMIZE") {
      sense = Sense::minimize;
    } else {
      fail(tokens[0], "unknown objective sense '" + std::string(tokens[0].text) + "'");
    }
    if (dialect_.objective_sense_section_honored) {
      instance_.sense = sense;
    } else {
      warn("OBJSENSE ignored by dialect");
    }
  }

  void rows_line(std::string_view line) {
    Token type, name;
    if (dialect_.mode == MpsDialect::Mode::fixed) {
      type = fixed_field(line, 1, 3);
      name = fixed_field(line, 4, 12);
      if (type.text.empty() || name.text.empty()) fail(2, "expected row type and name");
    } else {
      auto tokens = split_free(line);
      if (tokens.size() != 2) fail(tokens[0].column, "expected row type and name");
      type = tokens[0];
      name = tokens[1];
    }
    const std::string code = upper_copy(type.text);
    RowInfo info;
    if (code == "N") {
      info.type = RowType::N;
    } else if (code == "L") {
      info.type = RowType::L;
    } else if (code == "G") {
      info.type = RowType::G;
    } else if (code == "E") {
      info.type = RowType::E;
    } else {
      fail(type, "unknown row type '" + std::string(type.text) + "'");
    }
    std::string key(name.text);
    if (rows_.contains(key)) fail(name, "duplicate row name '" + key + "'");
    if (info.type == RowType::N) {
      info.index = n_rows_++;
      if (info.index == 0) {
        objective_row_ = key;
      } else {
        warn("additional objective row '" + key + "' ignored");
      }
    } else {
      info.index = instance_.rows.size();
      Row row;
      row.name = key;
      instance_.rows.push_back(std::move(row));
      row_stamp_.push_back(0);
    }
    rows_.emplace(std::move(key), info);
  }

  void columns_line(std::string_view line) {
    Token column;
    std::vector<Token> pairs;
    bool marker = false;
    if (dialect_.mode == MpsDialect::Mode::fixed) {
      column = fixed_field(line, 4, 12);
      if (fixed_field(line, 14, 22).text == "'MARKER'") {
        pairs.push_back(fixed_field(line, 14, 22));
        auto rest = split_free(line, 24);
        pairs.insert(pairs.end(), rest.begin(), rest.end());
      } else {
        pairs = fixed_pairs(line);
      }
      if (column.text.empty()) fail(5, "missing column name");
    } else {
      auto tokens = split_free(line);
      column = tokens[0];
      pairs.assign(tokens.begin() + 1, tokens.end());
    }
    if (!pairs.empty() && pairs[0].text == "'MARKER'") marker = true;

    if (marker) {
      if (pairs.size() < 2) fail(pairs[0], "MARKER line without marker type");
      const std::string kind = upper_copy(pairs[1].text);
      if (kind == "'INTORG'") {
        in_integer_block_ = true;
      } else if (kind == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        fail(pairs[1], "unknown marker " + std::string(pairs[1].text));
      }
      return;
    }

    if (pairs.size() != 2 && pairs.size() != 4) {
      fail(column, "COLUMNS line needs one or two (row, value) pairs");
    }

    std::string name(column.text);
    if (name != current_column_) {
      if (vars_.contains(name)) fail(column, "duplicate column name '" + name + "'");
      Variable v;
      v.name = name;
      v.kind = in_integer_block_ ? VarKind::general_integer : VarKind::continuous;
      vars_.emplace(name, instance_.variables.size());
      instance_.variables.push_back(std::move(v));
      var_info_.emplace_back();
      current_column_ = std::move(name);
      ++column_stamp_;
    }
    const std::size_t j = instance_.variables.size() - 1;

    for (std::size_t k = 0; k < pairs.size(); k += 2) {
      const Token& row_token = pairs[k];
      const double value = number(pairs[k + 1]);
      if (!std::isfinite(value)) fail(pairs[k + 1], "infinite matrix coefficient");
      auto it = rows_.find(std::string(row_token.text));
      if (it == rows_.end()) fail(row_token, "unknown row '" + std::string(row_token.text) + "'");
      const RowInfo& info = it->second;
      if (info.type == RowType::N) {
        if (info.index != 0) continue;
        if (objective_stamp_ == column_stamp_) {
          fail(row_token, "duplicate objective entry for column '" + current_column_ + "'");
        }
        objective_stamp_ = column_stamp_;
        instance_.variables[j].objective = value;
        continue;
      }
      if (row_stamp_[info.index] == column_stamp_) {
        fail(row_token, "duplicate entry for row '" + std::string(row_token.text) +
                            "' in column '" + current_column_ + "'");
      }
      row_stamp_[info.index] = column_stamp_;
      if (value != 0.0) instance_.rows[info.index].coefficients.push_back({j, value});
    }
  }

  void rhs_line(std::string_view line, bool ranges) {
    std::vector<Token> pairs;
    Token set_name;
    if (dialect_.mode == MpsDialect::Mode::fixed) {
      set_name = fixed_field(line, 4, 12);
      pairs = fixed_pairs(line);
    } else {
      auto tokens = split_free(line);
      // The set name is optional in free format: odd token counts carry it.
      std::size_t offset = tokens.size() % 2;
      if (offset) set_name = tokens[0];
      pairs.assign(tokens.begin() + static_cast<std::ptrdiff_t>(offset), tokens.end());
    }
    if (pairs.size() != 2 && pairs.size() != 4) {
      fail(pairs.empty() ? 1 : pairs[0].column, "expected one or two (row, value) pairs");
    }
    std::string& active = ranges ? range_set_ : rhs_set_;
    std::string set(set_name.text);
    if (!active_set_seen(ranges)) {
      active = set;
      (ranges ? range_set_seen_ : rhs_set_seen_) = true;
    } else if (set != active) {
      warn(std::string(ranges ? "RANGES" : "RHS") + " set '" + set + "' ignored");
      return;
    }

    for (std::size_t k = 0; k < pairs.size(); k += 2) {
      const Token& row_token = pairs[k];
      const double value = number(pairs[k + 1]);
      auto it = rows_.find(std::string(row_token.text));
      if (it == rows_.end()) fail(row_token, "unknown row '" + std::string(row_token.text) + "'");
      RowInfo& info = it->second;
      if (info.type == RowType::N) {
        if (ranges) {
          warn("RANGES entry on objective row ignored");
          continue;
        }
        if (info.index == 0) {
          if (objective_constant_set_) fail(row_token, "duplicate RHS entry for objective row");
          objective_constant_set_ = true;
          instance_.objective_constant = -value;
        }
        continue;
      }
      if (ranges) {
        if (info.range) fail(row_token, "duplicate RANGES entry for row '" + it->first + "'");
        if (!std::isfinite(value)) fail(pairs[k + 1], "infinite range");
        info.range = value;
      } else {
        if (info.side_set) fail(row_token, "duplicate RHS entry for row '" + it->first + "'");
        info.side_set = true;
        info.side = value;
      }
    }
  }

  bool active_set_seen(bool ranges) const { return ranges ? range_set_seen_ : rhs_set_seen_; }

  void bounds_line(std::string_view line) {
    Token type, column, value_token;
    bool has_value = false;
    if (dialect_.mode == MpsDialect::Mode::fixed) {
      type = fixed_field(line, 1, 3);
      column = fixed_field(line, 14, 22);
      auto rest = split_free(line, 24);
      if (rest.size() > 1) fail(rest[1], "unexpected trailing field");
      if (!rest.empty()) {
        value_token = rest[0];
        has_value = true;
      }
      if (type.text.empty() || column.text.empty()) fail(2, "expected bound type and column");
    } else {
      auto tokens = split_free(line);
      type = tokens[0];
      if (tokens.size() == 4) {
        column = tokens[2];
        value_token = tokens[3];
        has_value = true;
      } else if (tokens.size() == 3) {
        // Either "TYPE SET COL" or "TYPE COL VALUE" (set name omitted).
        if (vars_.contains(std::string(tokens[2].text))) {
          column = tokens[2];
        } else {
          column = tokens[1];
          value_token = tokens[2];
          has_value = true;
        }
      } else if (tokens.size() == 2) {
        column = tokens[1];
      } else {
        fail(type, "malformed BOUNDS line");
      }
    }

    const std::string code = upper_copy(type.text);
    auto it = vars_.find(std::string(column.text));
    if (it == vars_.end()) fail(column, "unknown column '" + std::string(column.text) + "'");
    const std::size_t j = it->second;
    Variable& v = instance_.variables[j];
    VarInfo& info = var_info_[j];
    info.last_bound_line = line_no_;

    auto value = [&]() {
      if (!has_value) fail(type, "bound type " + code + " requires a value");
      return number(value_token);
    };
    auto set_upper = [&](double u) {
      v.upper = u;
      if (u < 0.0 && !info.lower_explicit && v.lower == 0.0) {
        v.lower = -kInfinity;
        warn("negative upper bound on '" + v.name + "' moves its default lower bound to -inf");
      }
    };

    if (code == "UP") {
      set_upper(value());
    } else if (code == "LO") {
      v.lower = value();
      info.lower_explicit = true;
    } else if (code == "FX") {
      const double x = value();
      v.lower = v.upper = x;
      info.lower_explicit = true;
    } else if (code == "FR") {
      v.lower = -kInfinity;
      v.upper = kInfinity;
      info.lower_explicit = true;
    } else if (code == "MI") {
      v.lower = -kInfinity;
      info.lower_explicit = true;
    } else if (code == "PL") {
      v.upper = kInfinity;
    } else if (code == "BV") {
      v.kind = VarKind::binary;
      v.lower = 0.0;
      v.upper = 1.0;
      info.lower_explicit = true;
    } else if (code == "UI") {
      if (v.kind == VarKind::continuous) v.kind = VarKind::general_integer;
      set_upper(value());
    } else if (code == "LI") {
      if (v.kind == VarKind::continuous) v.kind = VarKind::general_integer;
      v.lower = value();
      info.lower_explicit = true;
    } else {
      fail(type, "unsupported bound type '" + std::string(type.text) + "'");
    }
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0)) {
      fail(type, "bound outside the binary domain for '" + v.name + "'");
    }
  }

  void finalize() {
    for (const auto& [name, info] : rows_) {
      if (info.type == RowType::N) continue;
      Row& row = instance_.rows[info.index];
      const double v = info.side;
      switch (info.type) {
        case RowType::L: row.lhs = -kInfinity; row.rhs = v; break;
        case RowType::G: row.lhs = v; row.rhs = kInfinity; break;
        case RowType::E: row.lhs = v; row.rhs = v; break;
        case RowType::N: break;
      }
      if (info.range) {
        const double r = *info.range;
        switch (info.type) {
          case RowType::L: row.lhs = v - std::abs(r); break;
          case RowType::G: row.rhs = v + std::abs(r); break;
          case RowType::E:
            if (r > 0.0) {
              row.rhs = v + r;
            } else if (r < 0.0) {
              row.lhs = v + r;
            }
            break;
          case RowType::N: break;
        }
      }
      if (std::isnan(row.lhs) || std::isnan(row.rhs) || row.lhs > row.rhs) {
        throw ParseError(line_no_, 1, "row '" + name + "' has inconsistent sides");
      }
    }
    for (std::size_t j = 0; j < instance_.variables.size(); ++j) {
      const auto& v = instance_.variables[j];
      if (v.lower > v.upper || v.lower == kInfinity || v.upper == -kInfinity) {
        throw ParseError(var_info_[j].last_bound_line, 1,
                         "variable '" + v.name + "' has inconsistent bounds");
      }
    }
  }

  std::string_view text_;
  MpsDialect dialect_;
  std::vector<MpsWarning>* warnings_;

  Instance instance_;
  Section section_ = Section::none;
  std::size_t line_no_ = 0;

  std::unordered_map<std::string, RowInfo> rows_;
  std::unordered_map<std::string, std::size_t> vars_;
  std::vector<VarInfo> var_info_;
  std::size_t n_rows_ = 0;
  std::string objective_row_;

  std::string current_column_;
  std::size_t column_stamp_ = 0;
  std::size_t objective_stamp_ = 0;
  std::vector<std::size_t> row_stamp_;
  bool in_integer_block_ = false;
  bool objective_constant_set_ = false;

  std::string rhs_set_, range_set_;
  bool rhs_set_seen_ = false, range_set_seen_ = false;
};

// --- writer ----------------------------------------------------------------

bool is_pos_zero(double x) { return std::bit_cast<std::uint64_t>(x) == 0; }
bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::string format_number(double x) {
  if (x == kInfinity) return "1e+30";
  if (x == -kInfinity) return "-1e+30";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct RangeEncoding {
  char type;
  double side;
  double range;
};

/// Finds an (L|G, side, range) triple that the reader maps back to exactly
/// [lhs, rhs].
std::optional<RangeEncoding> encode_range(double lhs, double rhs) {
  const double width = rhs - lhs;
  double up = width, down = width;
  for (int step = 0; step <= 8; ++step) {
    for (double r : {up, down}) {
      if (!(r > 0.0) || !std::isfinite(r)) continue;
      if (rhs - r == lhs) return RangeEncoding{'L', rhs, r};
      if (lhs + r == rhs) return RangeEncoding{'G', lhs, r};
    }
    up = std::nextafter(up, kInfinity);
    down = std::nextafter(down, 0.0);
  }
  return std::nullopt;
}

class Writer {
 public:
  Writer(const Instance& instance, const MpsDialect& dialect)
      : in_(instance), fixed_(dialect.mode == MpsDialect::Mode::fixed) {}

  std::string run() {
    validate(in_);
    check_names();
    objective_name_ = pick_objective_name();

    out_ << "NAME";
    if (!in_.name.empty()) out_ << (fixed_ ? "          " : " ") << in_.name;
    out_ << '\n';
    if (in_.sense == Sense::maximize) out_ << "OBJSENSE\n    MAX\n";

    std::vector<RangeEncoding> encodings(in_.num_rows());
    out_ << "ROWS\n";
    line("N", objective_name_, "", "");
    for (std::size_t i = 0; i < in_.num_rows(); ++i) {
      const Row& r = in_.rows[i];
      RangeEncoding enc{'L', r.rhs, 0.0};
      if (r.is_equality()) {
        enc = {'E', r.rhs, 0.0};
      } else if (r.lhs == -kInfinity) {
        enc = {'L', r.rhs, 0.0};
      } else if (r.rhs == kInfinity) {
        enc = {'G', r.lhs, 0.0};
      } else {
        auto found = encode_range(r.lhs, r.rhs);
        if (!found) {
          throw SerializationError("row '" + r.name +
                                   "' has sides that no MPS range reproduces exactly");
        }
        enc = *found;
      }
      encodings[i] = enc;
      line(std::string(1, enc.type), r.name, "", "");
    }

    write_columns();

    out_ << "RHS\n";
    if (!same_bits(in_.objective_constant, 0.0)) {
      line("", "RHS", objective_name_, format_number(-in_.objective_constant));
    }
    for (std::size_t i = 0; i < in_.num_rows(); ++i) {
      if (!is_pos_zero(encodings[i].side)) {
        line("", "RHS", in_.rows[i].name, format_number(encodings[i].side));
      }
    }

    bool any_range = std::any_of(encodings.begin(), encodings.end(),
                                 [](const RangeEncoding& e) { return e.range > 0.0; });
    if (any_range) {
      out_ << "RANGES\n";
      for (std::size_t i = 0; i < in_.num_rows(); ++i) {
        if (encodings[i].range > 0.0) {
          line("", "RNG", in_.rows[i].name, format_number(encodings[i].range));
        }
      }
    }

    write_bounds();
    out_ << "ENDATA\n";
    return out_.str();
  }

 private:
  void check_name(const std::string& name, const char* what) const {
    if (name.empty()) throw SerializationError(std::string("empty ") + what + " name");
    if (trim(name) != name) {
      throw SerializationError(std::string(what) + " name '" + name +
                               "' has leading or trailing whitespace");
    }
    if (fixed_) {
      if (name.size() > 8) {
        throw SerializationError(std::string(what) + " name '" + name +
                                 "' exceeds the 8-character fixed-format field; "
                                 "use the free dialect");
      }
    } else if (std::any_of(name.begin(), name.end(), is_space)) {
      throw SerializationError(std::string(what) + " name '" + name +
                               "' contains whitespace, which free format cannot carry");
    }
  }

  void check_names() const {
    if (in_.name.find('\n') != std::string::npos || trim(in_.name) != in_.name) {
      throw SerializationError("instance name must be a single trimmed line");
    }
    for (const auto& v : in_.variables) check_name(v.name, "variable");
    for (const auto& r : in_.rows) check_name(r.name, "row");
  }

  std::string pick_objective_name() const {
    std::string candidate = "OBJ";
    auto taken = [&](const std::string& s) {
      return std::any_of(in_.rows.begin(), in_.rows.end(),
                         [&](const Row& r) { return r.name == s; });
    };
    for (int k = 1; taken(candidate); ++k) candidate = "OBJ" + std::to_string(k);
    return candidate;
  }

  // Emits one data line. Fixed format places fields at columns 2, 5, 15, 25.
  void line(const std::string& f1, const std::string& f2, const std::string& f3,
            const std::string& f4) {
    if (fixed_) {
      std::string s(24, ' ');
      s.replace(1, f1.size(), f1);
      s.replace(4, f2.size(), f2);
      s.replace(14, f3.size(), f3);
      s += f4;
      while (!s.empty() && s.back() == ' ') s.pop_back();
      out_ << s << '\n';
      return;
    }
    out_ << ' ';
    if (!f1.empty()) out_ << f1 << ' ';
    out_ << "   " << f2;
    if (!f3.empty()) out_ << "  " << f3;
    if (!f4.empty()) out_ << "  " << f4;
    out_ << '\n';
  }

  void write_columns() {
    std::vector<std::vector<std::pair<std::size_t, double>>> by_column(in_.num_variables());
    for (std::size_t i = 0; i < in_.num_rows(); ++i) {
      for (const auto& e : in_.rows[i].coefficients) by_column[e.index].emplace_back(i, e.value);
    }
    out_ << "COLUMNS\n";
    bool in_block = false;
    for (std::size_t j = 0; j < in_.num_variables(); ++j) {
      const Variable& v = in_.variables[j];
      const bool integral = is_integral(v.kind);
      if (integral != in_block) {
        line("", "MARKER", "'MARKER'", integral ? "'INTORG'" : "'INTEND'");
        in_block = integral;
      }
      // A column needs at least one entry to be declared at all.
      if (!is_pos_zero(v.objective) || by_column[j].empty()) {
        line("", v.name, objective_name_, format_number(v.objective));
      }
      for (const auto& [i, value] : by_column[j]) {
        line("", v.name, in_.rows[i].name, format_number(value));
      }
    }
    if (in_block) line("", "MARKER", "'MARKER'", "'INTEND'");
  }

  void write_bounds() {
    std::ostringstream body;
    std::swap(out_, body);
    for (const auto& v : in_.variables) {
      if (v.kind == VarKind::binary) {
        line("BV", "BND", v.name, "");
        if (same_bits(v.lower, 0.0) && same_bits(v.upper, 1.0)) continue;
        if (same_bits(v.lower, v.upper)) {
          line("FX", "BND", v.name, format_number(v.lower));
          continue;
        }
        if (!same_bits(v.lower, 0.0)) line("LO", "BND", v.name, format_number(v.lower));
        if (!same_bits(v.upper, 1.0)) line("UP", "BND", v.name, format_number(v.upper));
        continue;
      }
      if (same_bits(v.lower, v.upper)) {
        line("FX", "BND", v.name, format_number(v.lower));
        continue;
      }
      if (v.lower == -kInfinity) {
        line("MI", "BND", v.name, "");
      } else if (!same_bits(v.lower, 0.0)) {
        line("LO", "BND", v.name, format_number(v.lower));
      }
      if (v.upper != kInfinity) line("UP", "BND", v.name, format_number(v.upper));
    }
    std::swap(out_, body);
    const std::string bounds = body.str();
    if (!bounds.empty()) out_ << "BOUNDS\n" << bounds;
  }

  const Instance& in_;
  bool fixed_;
  std::string objective_name_;
  std::ostringstream out_;
};

}  // namespace

Instance parse_mps(std::string_view text, const MpsDialect& dialect,
                   std::vector<MpsWarning>* warnings) {
  return Reader(text, dialect, warnings).run();
}

std::string write_mps(const Instance& instance, const MpsDialect& dialect) {
  return Writer(instance, dialect).run();
}

Instance read_mps_file(const std::filesystem::path& path, const MpsDialect& dialect,
                       std::vector<MpsWarning>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  try {
    return parse_mps(buffer.str(), dialect, warnings);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.string() + ": " + e.message());
  }
}

void write_mps_file(const std::filesystem::path& path, const Instance& instance,
                    const MpsDialect& dialect) {
  const std::string text = write_mps(instance, dialect);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace reoptbench
