#include "domes/error.hpp"

namespace domes {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Malformed: return "malformed";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::NonManifold: return "non-manifold";
    case ErrorKind::Glue: return "glue";
    case ErrorKind::Refine: return "refine";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Flip: return "flip";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Perturbation: return "perturbation";
    case ErrorKind::Stall: return "stall";
    case ErrorKind::Packing: return "packing";
    case ErrorKind::Approximation: return "approximation";
    case ErrorKind::Ring: return "ring";
    case ErrorKind::Closure: return "closure";
    case ErrorKind::Construction: return "construction";
    case ErrorKind::Config: return "config";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Io: return "io";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

}  // namespace domes
