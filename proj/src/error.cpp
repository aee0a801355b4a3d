#include "fraclap/error.hpp"

namespace fraclap {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidOrder: return "invalid-order";
    case ErrorKind::CoincidentPoints: return "coincident-points";
    case ErrorKind::SingularEvaluation: return "singular-evaluation";
    case ErrorKind::Smoothness: return "smoothness";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Regime: return "regime";
    case ErrorKind::Branch: return "branch";
    case ErrorKind::Config: return "config";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Extent: return "extent";
    case ErrorKind::UnknownCheck: return "unknown-check";
  }
  return "error";
}

}  // namespace fraclap
