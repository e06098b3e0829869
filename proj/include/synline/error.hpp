#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace synline {

enum class ErrorCode {
  NonPrime,
  DegreeOutOfRange,
  NotAPlane,
  NotAffine,
  BadIndex,
  ParseError,
  DuplicateFlag,
  SizeOutOfRange,
  NotTransitive,
  InvalidCollineation,
  BadFlag,
  NotAGroup,
  NotPartialLinear,
  BudgetZero,
  NotAnAutomorphism,
  NotAnEmbedding,
  BadPartition,
  NotSurjective,
  PreconditionFailed,
  EnumerationBound,
  NotRigid,
  InvalidOval,
  OrderOverflow,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPrime: return "NonPrime";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::NotAPlane: return "NotAPlane";
    case ErrorCode::NotAffine: return "NotAffine";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateFlag: return "DuplicateFlag";
    case ErrorCode::SizeOutOfRange: return "SizeOutOfRange";
    case ErrorCode::NotTransitive: return "NotTransitive";
    case ErrorCode::InvalidCollineation: return "InvalidCollineation";
    case ErrorCode::BadFlag: return "BadFlag";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::NotPartialLinear: return "NotPartialLinear";
    case ErrorCode::BudgetZero: return "BudgetZero";
    case ErrorCode::NotAnAutomorphism: return "NotAnAutomorphism";
    case ErrorCode::NotAnEmbedding: return "NotAnEmbedding";
    case ErrorCode::BadPartition: return "BadPartition";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::EnumerationBound: return "EnumerationBound";
    case ErrorCode::NotRigid: return "NotRigid";
    case ErrorCode::InvalidOval: return "InvalidOval";
    case ErrorCode::OrderOverflow: return "OrderOverflow";
  }
  return "Unknown";
}

/// Domain error raised by every synline operation. The code identifies the
/// failed precondition; what() carries a human readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Desk-scale limits. Every operation that can blow up takes one of these.
struct Limits {
  /// Maximum points + lines of any structure handled.
  std::size_t max_elements = 20000;
  /// Maximum number of group elements enumerated explicitly.
  std::uint64_t max_enumeration = 1000000;
  /// Largest field size accepted by build_field.
  std::uint64_t max_field = std::uint64_t{1} << 20;
};

inline void check_size(std::size_t elements, const Limits& limits, std::string_view what) {
  if (elements > limits.max_elements) {
    throw Error(ErrorCode::SizeOutOfRange,
                std::string(what) + " has " + std::to_string(elements) +
                    " elements, bound is " + std::to_string(limits.max_elements));
  }
}

}  // namespace synline
