#pragma once

#include <stdexcept>
#include <string>

namespace ssalt {

/// Input outside the domain of a model operation (bad plan, invalid
/// parameter vector, p outside (0, 1), ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// The operation is only defined for two-level plans.
class UnsupportedPlanError : public std::invalid_argument {
 public:
  explicit UnsupportedPlanError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Something that should not happen did (e.g. a sampler retry cap).
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ssalt
