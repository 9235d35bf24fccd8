#include "hgmdm/error.hpp"

namespace hgmdm {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Config: return "config";
    case ErrorCode::DegenerateRep: return "degenerate-representation";
    case ErrorCode::UnderresolvedDomain: return "underresolved-domain";
    case ErrorCode::UnderresolvedOscillation: return "underresolved-oscillation";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::NotIntegrable: return "not-integrable";
    case ErrorCode::InvalidSymbol: return "invalid-symbol";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::TailContamination: return "tail-contamination";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

}  // namespace hgmdm
