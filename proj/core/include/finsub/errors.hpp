#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finsub {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FINSUB_DEFINE_ERROR(Name)              \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

// jets
FINSUB_DEFINE_ERROR(DivisionByZeroJet);
FINSUB_DEFINE_ERROR(NegativeSqrtJet);
FINSUB_DEFINE_ERROR(OrderExceeded);

// minkowski / expression language
FINSUB_DEFINE_ERROR(UnknownVariable);
FINSUB_DEFINE_ERROR(ArityError);
FINSUB_DEFINE_ERROR(SingularDirection);

// germ
FINSUB_DEFINE_ERROR(NonInvertibleFrame);

// curvature
FINSUB_DEFINE_ERROR(NonPDTensor);
FINSUB_DEFINE_ERROR(NonPDZeta);
FINSUB_DEFINE_ERROR(StepUnderflow);

// pencil
FINSUB_DEFINE_ERROR(ZeroPencil);
FINSUB_DEFINE_ERROR(SingularA2);
FINSUB_DEFINE_ERROR(NotSemisimple);
FINSUB_DEFINE_ERROR(UnclassifiedConfiguration);

// invariants / example
FINSUB_DEFINE_ERROR(NotRuledDirection);
FINSUB_DEFINE_ERROR(NoParamsFound);

// io
FINSUB_DEFINE_ERROR(SchemaError);

#undef FINSUB_DEFINE_ERROR

/// Parse failure in the norm expression language; `position` is a 0-based
/// byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace finsub
