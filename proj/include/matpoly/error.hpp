#pragma once

#include <stdexcept>
#include <string>

namespace matpoly {

/// Coarse failure class, used by the CLI to pick an exit code.
enum class ErrorCategory {
    input,      ///< malformed or inconsistent caller data
    structure,  ///< the polynomial/pencil is not regular (or not square)
    numerical   ///< an iteration or conditioning failure
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory cat, const std::string& what) : std::runtime_error(what), cat_(cat) {}
    ErrorCategory category() const noexcept { return cat_; }

  private:
    ErrorCategory cat_;
};

#define MATPOLY_DEFINE_ERROR(Name, Cat)                                     \
    class Name : public Error {                                             \
      public:                                                               \
        explicit Name(const std::string& what = #Name)                      \
            : Error(ErrorCategory::Cat, std::string(#Name ": ") + what) {}  \
    }

MATPOLY_DEFINE_ERROR(DimensionMismatch, input);
MATPOLY_DEFINE_ERROR(ZeroPolynomialInput, input);
MATPOLY_DEFINE_ERROR(ZeroPolynomial, input);
MATPOLY_DEFINE_ERROR(ParseError, input);
MATPOLY_DEFINE_ERROR(InvariantViolation, input);
MATPOLY_DEFINE_ERROR(PlanInfeasible, input);
MATPOLY_DEFINE_ERROR(EigenvalueNotPresent, input);
MATPOLY_DEFINE_ERROR(ZeroEigenvalueInversion, input);
MATPOLY_DEFINE_ERROR(NotSemisimple, input);

MATPOLY_DEFINE_ERROR(NotSquare, structure);
MATPOLY_DEFINE_ERROR(NotRegular, structure);
MATPOLY_DEFINE_ERROR(SingularPencil, structure);
MATPOLY_DEFINE_ERROR(NotRegularFactor, structure);

MATPOLY_DEFINE_ERROR(SingularMatrix, numerical);
MATPOLY_DEFINE_ERROR(NoConvergence, numerical);
MATPOLY_DEFINE_ERROR(NotAnEigenvalue, numerical);
MATPOLY_DEFINE_ERROR(SingularQ0, numerical);
MATPOLY_DEFINE_ERROR(RankDeficientPair, numerical);
MATPOLY_DEFINE_ERROR(DegenerateFactor, numerical);
MATPOLY_DEFINE_ERROR(NotADivisor, numerical);
MATPOLY_DEFINE_ERROR(SpectrumAvoidanceFailed, numerical);

#undef MATPOLY_DEFINE_ERROR

}  // namespace matpoly
