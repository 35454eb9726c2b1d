#include "nhtopo/error.hpp"

namespace nhtopo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::Defective: return "Defective";
    case ErrorKind::DegenerateOnPath: return "DegenerateOnPath";
    case ErrorKind::RefinementExhausted: return "RefinementExhausted";
    case ErrorKind::ProjectionDegenerate: return "ProjectionDegenerate";
    case ErrorKind::WindingAlongLoop: return "WindingAlongLoop";
    case ErrorKind::NonTransversal: return "NonTransversal";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ProbeDegenerate: return "ProbeDegenerate";
    case ErrorKind::SeamInconsistent: return "SeamInconsistent";
    case ErrorKind::RoundingResidue: return "RoundingResidue";
    case ErrorKind::GridFormat: return "GridFormat";
    case ErrorKind::GridAlignment: return "GridAlignment";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace nhtopo
