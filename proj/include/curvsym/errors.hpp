#pragma once

#include <stdexcept>
#include <string>

namespace curvsym {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct PoleError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ParamError : Error { using Error::Error; };
struct AdmissibilityError : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct CatalogError : Error { using Error::Error; };
struct StepError : Error { using Error::Error; };
struct SingularityError : Error { using Error::Error; };

}  // namespace curvsym
