#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace fatmeasure {

/// Raised when an operation's documented precondition does not hold
/// (bad schedule parameters, dimension mismatch, degenerate boxes, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a stage cap or search budget is exhausted before the
/// requested result could be certified. Carries whatever partial result
/// the operation had assembled, already serialized.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, nlohmann::json partial = nullptr)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const nlohmann::json& partial() const { return partial_; }

 private:
  nlohmann::json partial_;
};

}  // namespace fatmeasure
