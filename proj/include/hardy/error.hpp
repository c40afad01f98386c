#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

enum class ErrorKind {
  InvalidArgument,
  NonIntegrableField,
  NonRadialField,
  TailUnresolved,
  NegativeFieldUnsupported,
  InvalidSpinSign,
  ZeroFlux,
  DivergentProduct,
  CaseMismatch,
  SingularWeight,
  NoConvergence,
  SupportOverlap,
  ConfigError,
};

const char* to_string(ErrorKind kind);

// Every library failure carries its kind and the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace hardy
