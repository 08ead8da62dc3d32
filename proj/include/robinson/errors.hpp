#pragma once

#include <stdexcept>
#include <string>

namespace robinson {

// Every failure carries the module that raised it and the check that failed,
// so pipeline aborts can be reported by name.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string check, const std::string& message)
      : std::runtime_error(module + "/" + check + ": " + message),
        module_(std::move(module)),
        check_(std::move(check)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& check() const noexcept { return check_; }

 private:
  std::string module_;
  std::string check_;
};

#define ROBINSON_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    using Error::Error;                                               \
  };

ROBINSON_DEFINE_ERROR(ParseError)
ROBINSON_DEFINE_ERROR(ValidationError)
ROBINSON_DEFINE_ERROR(UnsatisfiableError)
ROBINSON_DEFINE_ERROR(InstabilityError)
ROBINSON_DEFINE_ERROR(AmbiguityError)
ROBINSON_DEFINE_ERROR(CoverageError)
ROBINSON_DEFINE_ERROR(NonConvergenceError)
ROBINSON_DEFINE_ERROR(PrimitivityError)
ROBINSON_DEFINE_ERROR(PreconditionError)
ROBINSON_DEFINE_ERROR(IllDefinedMapError)
ROBINSON_DEFINE_ERROR(NonIntegerSpectrumError)
ROBINSON_DEFINE_ERROR(NonSplitError)
ROBINSON_DEFINE_ERROR(NonSolenoidError)
ROBINSON_DEFINE_ERROR(ArithmeticError)
ROBINSON_DEFINE_ERROR(CheckFailedError)

#undef ROBINSON_DEFINE_ERROR

}  // namespace robinson
