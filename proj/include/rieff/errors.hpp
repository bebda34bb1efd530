#pragma once

#include <stdexcept>
#include <string>

namespace rieff {

/// Base of every named numerical failure. name() is the stable identifier the
/// CLI reports; what() carries the detail.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& detail)
      : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define RIEFF_DEFINE_ERROR(Type)                                          \
  class Type : public Error {                                             \
   public:                                                                \
    explicit Type(const std::string& detail) : Error(#Type, detail) {}    \
  }

#define RIEFF_ERROR_LIST(X)                                                \
  X(DomainError) X(ParameterError) X(HyperbolicityLoss) X(CoincidentStates) \
  X(NewtonDivergence) X(StartDegenerate) X(NotAnInflectionStop)             \
  X(NonMonotoneCoordinate) X(TransitionOffLocus) X(NoTangency)              \
  X(NoIntersection) X(CFLViolation)

#define RIEFF_DECLARE(Type) RIEFF_DEFINE_ERROR(Type);
RIEFF_ERROR_LIST(RIEFF_DECLARE)
#undef RIEFF_DECLARE

/// Rethrows `e` as the same error type with `context` prepended.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string detail = context + ": " + (e.what() + e.name().size() + 2);
#define RIEFF_RETHROW(Type) \
  if (e.name() == #Type) throw Type(detail);
  RIEFF_ERROR_LIST(RIEFF_RETHROW)
#undef RIEFF_RETHROW
  throw Error(e.name(), detail);
}

#undef RIEFF_DEFINE_ERROR

}  // namespace rieff
