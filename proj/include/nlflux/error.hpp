#pragma once

#include <stdexcept>
#include <string>

namespace nlflux {

enum class ErrorKind {
  InvalidArgument,
  NonmonotoneLaw,
  NewtonStall,
  Inconclusive,
  QuadratureFailure,
  IntegrationFailure,
  ImageSeriesTooShort,
  ConvergedToZero,
  NoDescent,
  Unclassifiable,
  Io,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-readable failure kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Numerical failures (as opposed to bad input or I/O).
  bool is_solver_failure() const noexcept {
    return kind_ != ErrorKind::InvalidArgument && kind_ != ErrorKind::Io;
  }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace nlflux
