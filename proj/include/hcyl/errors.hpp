#pragma once

#include <stdexcept>
#include <string>

namespace hcyl {

// Named precondition failures. The CLI maps every Error to exit code 3.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Malformed text or JSON input (exit code 2).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& detail) : std::runtime_error("ParseError: " + detail) {}
};

#define HCYL_DEFINE_ERROR(Name) \
  struct Name : Error {         \
    explicit Name(const std::string& detail) : Error(#Name, detail) {} \
  }

HCYL_DEFINE_ERROR(TruncationMismatch);
HCYL_DEFINE_ERROR(RankMismatch);
HCYL_DEFINE_ERROR(NotAUnit);
HCYL_DEFINE_ERROR(BadAugmentation);
HCYL_DEFINE_ERROR(NonzeroConstantTerm);
HCYL_DEFINE_ERROR(SingularAugmentation);
HCYL_DEFINE_ERROR(PreconditionViolated);
HCYL_DEFINE_ERROR(AugmentationNotZero);
HCYL_DEFINE_ERROR(FiltrationTooShallow);
HCYL_DEFINE_ERROR(NotHomogeneous);
HCYL_DEFINE_ERROR(DegreeOnePartSingular);
HCYL_DEFINE_ERROR(NotAHomologyCylinder);
HCYL_DEFINE_ERROR(InconsistentRelators);
HCYL_DEFINE_ERROR(NonIntegralEulerShift);
HCYL_DEFINE_ERROR(NotTorelli);
HCYL_DEFINE_ERROR(LowerDegreeNonzero);

#undef HCYL_DEFINE_ERROR

}  // namespace hcyl
