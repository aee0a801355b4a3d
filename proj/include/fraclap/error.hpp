#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

enum class ErrorKind {
  InvalidOrder,
  CoincidentPoints,
  SingularEvaluation,
  Smoothness,
  Domain,
  Geometry,
  Regime,
  Branch,
  Config,
  Divergence,
  Precondition,
  Extent,
  UnknownCheck,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fraclap
