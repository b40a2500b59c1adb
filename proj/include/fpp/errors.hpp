#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

// Every error raised by the library derives from Error, so callers (the CLI in
// particular) can map it to a machine-readable record via kind().
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define FPP_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

FPP_DEFINE_ERROR(DomainError)
FPP_DEFINE_ERROR(NotAdjacent)
FPP_DEFINE_ERROR(BudgetExceeded)
FPP_DEFINE_ERROR(UnsupportedModel)
FPP_DEFINE_ERROR(QuadratureFailure)
FPP_DEFINE_ERROR(SamplerMismatch)
FPP_DEFINE_ERROR(ConfigError)
FPP_DEFINE_ERROR(IoError)
FPP_DEFINE_ERROR(InvariantViolation)

#undef FPP_DEFINE_ERROR

}  // namespace fpp
