#pragma once

#include <stdexcept>
#include <string>

namespace markovsharp {

// Bad user input: malformed or non-integrable weight, out-of-range degree.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// A theorem hypothesis on the singular exponents does not hold.
class HypothesisViolation : public InvalidArgument {
 public:
  explicit HypothesisViolation(const std::string& what) : InvalidArgument(what) {}
};

// Iteration caps, loss of positivity, failed post-checks.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace markovsharp
