#pragma once

#include <stdexcept>
#include <string>

namespace so3seek {

// Principal logarithm undefined: tr(R) <= -1 + kTraceGuard.
class NearPiSingularity : public std::domain_error {
 public:
  explicit NearPiSingularity(const std::string& what) : std::domain_error(what) {}
};

// Input violates a structural invariant (non-skew matrix, non-unit vector, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Ascending-direction estimate vanished; the heading field is undefined.
class DegenerateDirection : public std::domain_error {
 public:
  explicit DegenerateDirection(const std::string& what) : std::domain_error(what) {}
};

// Deployment covariance is rank deficient.
class DegenerateDeployment : public std::domain_error {
 public:
  explicit DegenerateDeployment(const std::string& what) : std::domain_error(what) {}
};

// Minimal rotation between antipodal headings is ill-defined.
class AntipodalHeading : public std::domain_error {
 public:
  explicit AntipodalHeading(const std::string& what) : std::domain_error(what) {}
};

// Scenario or simulation configuration rejected during validation.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace so3seek
