#pragma once

#include <stdexcept>
#include <string>

namespace salieval {

// Base class for all library errors. Subclasses map onto the CLI exit codes
// (config -> 2, verification -> 3, training -> 4, everything else -> 1).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data (bad JSONL/TSV record, bad checkpoint bytes).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A domain invariant does not hold (empty corpus, label outside {0,1}).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Tensor shapes incompatible with the requested op.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf encountered where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Normal system not positive definite; callers may retry with more damping.
class SingularSystemError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Token or token-id not present in a vocabulary.
class VocabError : public Error {
 public:
  using Error::Error;
};

// Input sequence longer than the model allows.
class LengthError : public Error {
 public:
  using Error::Error;
};

// API misuse: preconditions of an operation not met.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Shortcut/distractor insertion impossible for the given example.
class InjectionError : public Error {
 public:
  using Error::Error;
};

// Indicator token already present in the corpus vocabulary.
class ConflictError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class VerificationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace salieval
