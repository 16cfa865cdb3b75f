#include "reoptbench/error.hpp"

namespace reoptbench {

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& message)
    : Error("line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

ProtocolError::ProtocolError(std::size_t line, const std::string& message)
    : Error("protocol error at line " + std::to_string(line) + ": " + message),
      line_(line) {}

}  // namespace reoptbench
