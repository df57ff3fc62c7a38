#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lgp {

enum class ErrorKind {
  InvalidInput,
  CrossingChords,
  OnSkeleton,
  OutsideDomain,
  PlateauThreshold,
  NestingConflict,
  NonConvexDomain,
  DomainMismatch,
  TraceMismatch,
  AllFree,
  Infeasible,
  ConstraintViolation,
  TooManyVertices,
  GridTooCoarse,
  ShapeMismatch,
  NonConvergence,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// front ends can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace lgp
