#pragma once

#include <stdexcept>
#include <string>

namespace domes {

enum class ErrorKind {
  Malformed,      // input does not have the required shape
  Dimension,      // mismatched sizes
  NonManifold,    // an edge is shared by three or more faces
  Glue,           // glued vertices do not coincide
  Refine,         // non-uniform edge lengths for subdivision
  Domain,         // argument outside the domain of a formula
  Flip,           // flip axis out of range
  Precondition,   // other violated precondition
  Perturbation,   // generic perturbation could not be achieved
  Stall,          // iterative scheme stopped making progress
  Packing,        // packing bound or apex circumradius violated
  Approximation,  // requested accuracy not reached
  Ring,           // regular-polygon ring construction failed
  Closure,        // closure root not bracketed
  Construction,   // parameters do not define a valid object
  Config,         // unusable assembly configuration
  Unsupported,    // valid input that this operation does not handle
  Io,             // file system / parse failures
  Usage,          // bad command line or option value
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace domes
