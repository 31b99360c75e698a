#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mpa {

/// Base class for all analysis errors. code() is module-qualified, e.g.
/// "eigensystem.RepeatedEigenvalues", so callers (and the CLI) can tell
/// input problems from analysis failures without string-matching what().
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define MPA_DEFINE_ERROR(Name, Qualified)                \
  class Name : public Error {                            \
   public:                                               \
    explicit Name(const std::string& what)               \
        : Error(Qualified, what) {}                      \
  }

// Input / precondition errors (CLI exit code 2).
MPA_DEFINE_ERROR(DimensionMismatch, "mpa.DimensionMismatch");
MPA_DEFINE_ERROR(InvalidArgument, "mpa.InvalidArgument");
MPA_DEFINE_ERROR(SchemaError, "cli.SchemaError");

// Analysis errors (CLI exit code 1).
MPA_DEFINE_ERROR(RepeatedEigenvalues, "eigensystem.RepeatedEigenvalues");
MPA_DEFINE_ERROR(NumericalFailure, "eigensystem.NumericalFailure");
MPA_DEFINE_ERROR(DegenerateSamples, "participation.DegenerateSamples");
MPA_DEFINE_ERROR(ZeroLeftEigenvector, "participation.ZeroLeftEigenvector");
MPA_DEFINE_ERROR(BudgetExceeded, "resonance.BudgetExceeded");
MPA_DEFINE_ERROR(SmallDivisor, "normalform.SmallDivisor");
MPA_DEFINE_ERROR(NoConvergence, "normalform.NoConvergence");
MPA_DEFINE_ERROR(LinearPartMismatch, "normalform.LinearPartMismatch");
MPA_DEFINE_ERROR(RegimeNotEstablished, "normalform.RegimeNotEstablished");
MPA_DEFINE_ERROR(RegionExceeded, "dynamics.RegionExceeded");
MPA_DEFINE_ERROR(StepUnderflow, "dynamics.StepUnderflow");
MPA_DEFINE_ERROR(NonFinite, "dynamics.NonFinite");

#undef MPA_DEFINE_ERROR

}  // namespace mpa
