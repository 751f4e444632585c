#pragma once

#include <stdexcept>
#include <string>

namespace dln {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorKind {
  Assumption,  // the input violates a modelling assumption (exit 2)
  Solver,      // a numerical routine failed to deliver (exit 3)
  Io,          // file system trouble (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define DLN_DEFINE_ERROR(Name, Kind)                          \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what)                    \
        : Error(ErrorKind::Kind, std::string(#Name ": ") + what) {} \
  };

DLN_DEFINE_ERROR(Infeasible, Assumption)
DLN_DEFINE_ERROR(InvalidParameters, Assumption)
DLN_DEFINE_ERROR(InvalidDims, Assumption)
DLN_DEFINE_ERROR(DomainViolation, Assumption)
DLN_DEFINE_ERROR(KernelDimMismatch, Assumption)
DLN_DEFINE_ERROR(DegenerateSupport, Assumption)
DLN_DEFINE_ERROR(DegenerateWeights, Assumption)
DLN_DEFINE_ERROR(EmptyPolytope, Assumption)
DLN_DEFINE_ERROR(DegenerateFit, Assumption)
DLN_DEFINE_ERROR(NoBracket, Solver)
DLN_DEFINE_ERROR(Overflow, Solver)
DLN_DEFINE_ERROR(Unbounded, Solver)
DLN_DEFINE_ERROR(SignConflict, Solver)
DLN_DEFINE_ERROR(StepCollapse, Solver)
DLN_DEFINE_ERROR(Divergence, Solver)
DLN_DEFINE_ERROR(IoError, Io)

#undef DLN_DEFINE_ERROR

/// Adaptive quadrature ran out of subdivision depth; carries the best estimate.
class MaxDepth : public Error {
 public:
  MaxDepth(const std::string& what, double estimate)
      : Error(ErrorKind::Solver, "MaxDepth: " + what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

}  // namespace dln
