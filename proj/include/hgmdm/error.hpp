#pragma once

#include <stdexcept>
#include <string>

namespace hgmdm {

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  Domain = 1,            // argument outside the mathematical domain (r <= 0, ...)
  Config,                // inconsistent sizes / invalid configuration values
  DegenerateRep,         // lambda == 0
  UnderresolvedDomain,   // integrand not decayed at the quadrature box edge
  UnderresolvedOscillation,  // Nyquist violation
  OutOfDomain,           // sampled function evaluated outside its box
  NotIntegrable,         // profile or trace sum not integrable
  InvalidSymbol,         // symbol outside the class an operation accepts
  Unsupported,           // e.g. Leibniz weight cap exceeded
  TailContamination,     // mode too close to the Hermite truncation
  Io,
  Parse,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) fail(code, message);
}

}  // namespace hgmdm
