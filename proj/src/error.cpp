#include "hardy/error.hpp"

namespace hardy {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonIntegrableField: return "NonIntegrableField";
    case ErrorKind::NonRadialField: return "NonRadialField";
    case ErrorKind::TailUnresolved: return "TailUnresolved";
    case ErrorKind::NegativeFieldUnsupported: return "NegativeFieldUnsupported";
    case ErrorKind::InvalidSpinSign: return "InvalidSpinSign";
    case ErrorKind::ZeroFlux: return "ZeroFlux";
    case ErrorKind::DivergentProduct: return "DivergentProduct";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::SingularWeight: return "SingularWeight";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SupportOverlap: return "SupportOverlap";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error(module + ": " + to_string(kind) + ": " + message),
      kind_(kind),
      module_(std::move(module)) {}

}  // namespace hardy
