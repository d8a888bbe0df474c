#pragma once

#include <stdexcept>
#include <string>

namespace portopt {

// Base for every failure the library raises deliberately. code() is a stable
// machine-readable tag (matches the class name); what() is for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define PORTOPT_DEFINE_ERROR(NAME)                                  \
  class NAME : public Error {                                       \
   public:                                                          \
    explicit NAME(const std::string& message) : Error(#NAME, message) {} \
  }

PORTOPT_DEFINE_ERROR(ParseError);
PORTOPT_DEFINE_ERROR(ValidationError);
PORTOPT_DEFINE_ERROR(SingularCovariance);
PORTOPT_DEFINE_ERROR(ZeroWealth);
PORTOPT_DEFINE_ERROR(DegeneratePortfolio);
PORTOPT_DEFINE_ERROR(DegenerateNormalization);
PORTOPT_DEFINE_ERROR(NoPositiveExcess);
PORTOPT_DEFINE_ERROR(NoConvergence);
PORTOPT_DEFINE_ERROR(InfeasibleProjection);
PORTOPT_DEFINE_ERROR(DimensionTooLarge);
PORTOPT_DEFINE_ERROR(SkewnessOutOfRange);
PORTOPT_DEFINE_ERROR(DegenerateDenominator);
PORTOPT_DEFINE_ERROR(IterationLimit);

#undef PORTOPT_DEFINE_ERROR

// Cholesky failure; pivot() is the zero-based index of the first pivot that
// fell at or below the positivity threshold.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(int pivot, const std::string& message)
      : Error("NotPositiveDefinite", message), pivot_(pivot) {}
  int pivot() const noexcept { return pivot_; }

 private:
  int pivot_;
};

}  // namespace portopt
