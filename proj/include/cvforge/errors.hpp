#pragma once

#include <stdexcept>
#include <string>

namespace cvforge {

enum class ErrorKind {
  ContextMismatch,
  NonUnit,
  DegenerateMetric,
  MissingTensor,
  BadLaurentRange,
  AxiomFailure,
  SharedDataMismatch,
  OrderTooLow,
  NoUnfolding,
  BadSection,
  DegenerateInducedMetric,
  NotPositiveDefinite,
  ZeroVector,
  OnDiscriminant,
  OnCaustic,
  ZeroMatrix,
  ProjectionFailed,
  NotIrreducible,
  NonPositiveInput,
  DuplicateEigenvalues,
  InconsistentOrder,
  Inconsistent,
  SchemaError,
  InvariantViolation,
  NonRealWeight,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cvforge
