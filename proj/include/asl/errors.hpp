#pragma once

#include <stdexcept>
#include <string>

namespace asl {

// Base class for all domain errors; the CLI maps these to exit code 1.
class AslError : public std::runtime_error {
 public:
  AslError(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct UnknownPredicateError : AslError {
  explicit UnknownPredicateError(const std::string& indicator)
      : AslError("UnknownPredicate", indicator) {}
};

struct UnboundArithmeticError : AslError {
  explicit UnboundArithmeticError(const std::string& detail)
      : AslError("UnboundArithmetic", detail) {}
};

struct NonGroundComparisonError : AslError {
  explicit NonGroundComparisonError(const std::string& detail)
      : AslError("NonGroundComparison", detail) {}
};

struct RetractMissingError : AslError {
  explicit RetractMissingError(const std::string& detail)
      : AslError("RetractMissing", detail) {}
};

struct JointActionViolationError : AslError {
  explicit JointActionViolationError(const std::string& detail)
      : AslError("JointActionViolation", detail) {}
};

struct DegenerateDistributionError : AslError {
  explicit DegenerateDistributionError(const std::string& detail)
      : AslError("DegenerateDistribution", detail) {}
};

struct NoParticipantsError : AslError {
  explicit NoParticipantsError(const std::string& detail)
      : AslError("NoParticipants", detail) {}
};

struct NoMoversError : AslError {
  explicit NoMoversError(const std::string& detail)
      : AslError("NoMovers", detail) {}
};

struct MissingPayoffError : AslError {
  explicit MissingPayoffError(const std::string& detail)
      : AslError("MissingPayoff", detail) {}
};

struct AmbiguousPayoffError : AslError {
  explicit AmbiguousPayoffError(const std::string& detail)
      : AslError("AmbiguousPayoff", detail) {}
};

struct UnsupportedShapeError : AslError {
  explicit UnsupportedShapeError(const std::string& detail)
      : AslError("UnsupportedShape", detail) {}
};

struct UnsupportedFormatError : AslError {
  explicit UnsupportedFormatError(const std::string& detail)
      : AslError("UnsupportedFormat", detail) {}
};

struct NodeBudgetError : AslError {
  explicit NodeBudgetError(const std::string& detail)
      : AslError("NodeBudget", detail) {}
};

struct SyntaxError : AslError {
  explicit SyntaxError(const std::string& detail) : AslError("SyntaxError", detail) {}
};

struct OperatorError : AslError {
  explicit OperatorError(const std::string& detail) : AslError("OperatorError", detail) {}
};

}  // namespace asl
