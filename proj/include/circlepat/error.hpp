#pragma once

#include <stdexcept>
#include <string>

namespace circlepat {

enum class ErrorKind {
  InvalidInput,
  NonManifold,
  OrientationMismatch,
  NotClosed,
  DegenerateQuadruple,
  NoConvergence,
  DivergedToInfinity,
  NotInW,
  DegenerateLink,
  DegenerateLayout,
  HolonomyInconsistent,
  InfinitePoint,
  FormNotClosed,
  FaceDependence,
  DegeneratePair,
  TheoremViolation,
  Io,
  Format,
};

const char* to_string(ErrorKind kind);

// Short scientific rendering of a diagnostic value for messages.
std::string format_value(double v);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace circlepat
