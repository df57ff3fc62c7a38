#include "lgp/error.hpp"

namespace lgp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::CrossingChords: return "CrossingChords";
    case ErrorKind::OnSkeleton: return "OnSkeleton";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::PlateauThreshold: return "PlateauThreshold";
    case ErrorKind::NestingConflict: return "NestingConflict";
    case ErrorKind::NonConvexDomain: return "NonConvexDomain";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::TraceMismatch: return "TraceMismatch";
    case ErrorKind::AllFree: return "AllFree";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::TooManyVertices: return "TooManyVertices";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonConvergence: return "NonConvergence";
  }
  return "Unknown";
}

}  // namespace lgp
