#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace memnet {

/// Shape or precondition violation on numeric inputs. Never recoverable.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke an operation contract (e.g. asked for the location of an aspect token).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad user-level input: empty datasets, empty sentences, length mismatches.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required file could not be opened.
class MissingFileError : public std::runtime_error {
 public:
  explicit MissingFileError(const std::string& path)
      : std::runtime_error("cannot open file: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Malformed file content. line() is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// An aspectTerm's character offsets do not land on token boundaries.
class AlignmentError : public ParseError {
 public:
  AlignmentError(const std::string& sentence_id, const std::string& detail)
      : ParseError("aspect offsets do not align with tokens in sentence '" + sentence_id +
                       "': " + detail,
                   0) {}
};

/// Non-finite value appeared where the math must stay finite.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checkpoint incompatible with the requested run configuration.
class ConfigMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace memnet
