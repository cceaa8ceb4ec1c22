#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coneslice {

enum class ErrorKind {
  DimensionMismatch,
  Degenerate,
  NotAdmissible,
  NotInterior,
  PointNotOnPlane,
  DomainError,
  InfeasibleAngles,
  NotStationary,
  NoConvergence,
  NotBoundary,
  VertexPoint,
  AtVertex,
};

// Every failure raised by the library carries a kind so the CLI can map it
// onto a stable error payload.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::NotInterior: return "NotInterior";
    case ErrorKind::PointNotOnPlane: return "PointNotOnPlane";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InfeasibleAngles: return "InfeasibleAngles";
    case ErrorKind::NotStationary: return "NotStationary";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotBoundary: return "NotBoundary";
    case ErrorKind::VertexPoint: return "VertexPoint";
    case ErrorKind::AtVertex: return "AtVertex";
  }
  return "Unknown";
}

}  // namespace coneslice
