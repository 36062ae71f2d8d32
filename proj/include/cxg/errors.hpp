#pragma once

#include <stdexcept>
#include <string>

namespace cxg {

// Bad parameter values. The CLI reports these as usage errors (exit 1).
class ArgumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (exit 2 from the CLI).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a domain constraint (exit 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A corpus file with no sentences at all (exit 2).
class EmptyCorpusError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cxg
