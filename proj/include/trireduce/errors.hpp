#pragma once

#include <stdexcept>
#include <string>

namespace trireduce {

// Base of every failure the library reports. Numerical and geometric
// failures derive from it so callers can map them to a single exit path.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define TRIREDUCE_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                 \
   public:                                                    \
    using Error::Error;                                       \
    const char* kind() const noexcept override { return #Name; } \
  };

TRIREDUCE_DEFINE_ERROR(InvalidInput)
TRIREDUCE_DEFINE_ERROR(DegenerateShape)
TRIREDUCE_DEFINE_ERROR(SingularInertia)
TRIREDUCE_DEFINE_ERROR(CollinearInput)
TRIREDUCE_DEFINE_ERROR(MisalignedFrame)
TRIREDUCE_DEFINE_ERROR(ZeroAngularMomentum)
TRIREDUCE_DEFINE_ERROR(NotCollinear)
TRIREDUCE_DEFINE_ERROR(NumericalBlowup)

#undef TRIREDUCE_DEFINE_ERROR

}  // namespace trireduce
