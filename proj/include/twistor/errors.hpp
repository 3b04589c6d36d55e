#pragma once

#include <stdexcept>
#include <string>

namespace twistor {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TWISTOR_DEFINE_ERROR(Name)     \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

TWISTOR_DEFINE_ERROR(DimensionMismatch);
TWISTOR_DEFINE_ERROR(RealPointError);
TWISTOR_DEFINE_ERROR(SingularMatrixError);
TWISTOR_DEFINE_ERROR(FiberMismatchError);
TWISTOR_DEFINE_ERROR(DegenerateQuadric);
TWISTOR_DEFINE_ERROR(AmbientTooSmall);
TWISTOR_DEFINE_ERROR(HasRealPoints);
TWISTOR_DEFINE_ERROR(RankDeficientBasis);
TWISTOR_DEFINE_ERROR(StepTooLarge);
TWISTOR_DEFINE_ERROR(ZeroCovector);
TWISTOR_DEFINE_ERROR(VectorInPlane);
TWISTOR_DEFINE_ERROR(FiberMultiplicityError);
TWISTOR_DEFINE_ERROR(RankDeficientTangent);
TWISTOR_DEFINE_ERROR(IllConditionedExpansion);

#undef TWISTOR_DEFINE_ERROR

}  // namespace twistor
