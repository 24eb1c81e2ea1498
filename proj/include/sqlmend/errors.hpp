#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqlmend {

/// Malformed SQL text. `position` is a byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Well-formed SQL that falls outside the supported subset.
class UnsupportedConstruct : public ParseError {
 public:
  UnsupportedConstruct(const std::string& construct, std::size_t position)
      : ParseError("unsupported construct: " + construct, position), construct_(construct) {}
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class StructureError : public std::runtime_error {
 public:
  enum class Kind { MissingSlot, KindMismatch, UnknownSlot };
  StructureError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ExecutionError : public std::runtime_error {
 public:
  enum class Kind {
    UnknownTable,
    UnknownColumn,
    AmbiguousColumn,
    TypeError,
    ArityMismatch,
    Unsupported
  };
  ExecutionError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Schema/CSV/JSON loading failures.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqlmend
