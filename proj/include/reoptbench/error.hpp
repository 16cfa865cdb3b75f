#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reoptbench {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension or shape mismatch between objects that must agree.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Input value outside the documented domain (NaN in a solution, bad parameter).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's contract (e.g. a delta touching a component
/// outside its variation mask).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Positioned error from the MPS reader. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class SerializationError : public Error {
 public:
  using Error::Error;
};

/// A generator recipe cannot be applied to the given base instance.
class RecipeInapplicable : public Error {
 public:
  using Error::Error;
};

class InsufficientCandidates : public Error {
 public:
  using Error::Error;
};

/// Similarity of a zero vector is undefined.
class UndefinedSimilarity : public Error {
 public:
  using Error::Error;
};

/// Missing entries in a rank table or score series.
class IncompleteData : public Error {
 public:
  using Error::Error;
};

/// Malformed solver event stream. Line is the 1-based line of the child's
/// standard output.
class ProtocolError : public Error {
 public:
  ProtocolError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Instance is outside what the enumeration oracle can handle.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace reoptbench
