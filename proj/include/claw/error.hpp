#ifndef CLAW_ERROR_HPP_
#define CLAW_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace claw {

// Base of every error raised by the library. Each subclass corresponds to one
// failure condition of an operation; callers catch by the precise type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CLAW_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

CLAW_DEFINE_ERROR(UnknownFlux);
CLAW_DEFINE_ERROR(NonFiniteFlux);
CLAW_DEFINE_ERROR(SingularPoint);
CLAW_DEFINE_ERROR(QuadratureNonConvergent);
CLAW_DEFINE_ERROR(BadWindow);
CLAW_DEFINE_ERROR(CFLViolation);
CLAW_DEFINE_ERROR(BlowUp);
CLAW_DEFINE_ERROR(GridMismatch);
CLAW_DEFINE_ERROR(SupportExceedsDomain);
CLAW_DEFINE_ERROR(MissingTimeLevels);
CLAW_DEFINE_ERROR(EmptyCone);
CLAW_DEFINE_ERROR(SampleNearShock);
CLAW_DEFINE_ERROR(ConfigError);
CLAW_DEFINE_ERROR(FormatError);

#undef CLAW_DEFINE_ERROR

}  // namespace claw

#endif  // CLAW_ERROR_HPP_
