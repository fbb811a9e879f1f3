#pragma once

#include <stdexcept>
#include <string>

namespace essmin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ESSMIN_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  };

ESSMIN_DEFINE_ERROR(DegreeMismatch)
ESSMIN_DEFINE_ERROR(ZeroDenominator)
ESSMIN_DEFINE_ERROR(NotContinuous)
ESSMIN_DEFINE_ERROR(UnknownName)
ESSMIN_DEFINE_ERROR(EnclosureUnavailable)
ESSMIN_DEFINE_ERROR(DegreeTooLarge)
ESSMIN_DEFINE_ERROR(NonConvergence)
ESSMIN_DEFINE_ERROR(InvalidArgument)
ESSMIN_DEFINE_ERROR(ToleranceNotMet)
ESSMIN_DEFINE_ERROR(SingularIntegrand)
ESSMIN_DEFINE_ERROR(LPInfeasible)
ESSMIN_DEFINE_ERROR(NotReduced)
ESSMIN_DEFINE_ERROR(ConfigInvalid)
ESSMIN_DEFINE_ERROR(HashMismatch)
ESSMIN_DEFINE_ERROR(CorruptCheckpoint)
ESSMIN_DEFINE_ERROR(IOError)
ESSMIN_DEFINE_ERROR(ParseError)
ESSMIN_DEFINE_ERROR(WeakDualityViolation)

#undef ESSMIN_DEFINE_ERROR

}  // namespace essmin
