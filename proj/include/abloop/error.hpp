#pragma once

#include <stdexcept>
#include <string>

namespace abloop {

enum class ErrorKind {
  precondition,   // caller violated a documented precondition
  geometry,       // curve data rejected (closure, enclosure, strip limits)
  singularity,    // evaluation hit the flux line
  convergence,    // iterative method did not converge
  root_bracketing,
  resolution,     // grid too coarse for the requested problem
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::geometry: return "geometry rejected";
    case ErrorKind::singularity: return "singular point";
    case ErrorKind::convergence: return "no convergence";
    case ErrorKind::root_bracketing: return "root bracketing failed";
    case ErrorKind::resolution: return "insufficient resolution";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

}  // namespace abloop
