#pragma once

#include <stdexcept>
#include <string>

namespace nil {

enum class ErrorKind {
  InvalidInput,        // bad arguments, violated preconditions
  InvalidResolution,   // mesh resolution below minimum
  DuplicatePoints,
  NoConvergence,       // a numerical solve failed to reach tolerance
  OutOfModelRange,     // required arc length beyond the 2*pi working range
  RadiusBound,         // sphere radius outside (0, 2*pi]
  NotOnLine,
  NotOnSurface,
  TargetNotOnArc,
  EmptySurface,
  EmptyIntersection,
  MinimizerAmbiguous,
  ArcSurfaceMiss,
  NoArcIntersection,
  ThirdCevianMiss,
  BothMidpoints,
  DegenerateProjection,
};

struct Error : std::runtime_error {
  ErrorKind kind;
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidResolution: return "InvalidResolution";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OutOfModelRange: return "OutOfModelRange";
    case ErrorKind::RadiusBound: return "RadiusBound";
    case ErrorKind::NotOnLine: return "NotOnLine";
    case ErrorKind::NotOnSurface: return "NotOnSurface";
    case ErrorKind::TargetNotOnArc: return "TargetNotOnArc";
    case ErrorKind::EmptySurface: return "EmptySurface";
    case ErrorKind::EmptyIntersection: return "EmptyIntersection";
    case ErrorKind::MinimizerAmbiguous: return "MinimizerAmbiguous";
    case ErrorKind::ArcSurfaceMiss: return "ArcSurfaceMiss";
    case ErrorKind::NoArcIntersection: return "NoArcIntersection";
    case ErrorKind::ThirdCevianMiss: return "ThirdCevianMiss";
    case ErrorKind::BothMidpoints: return "BothMidpoints";
    case ErrorKind::DegenerateProjection: return "DegenerateProjection";
  }
  return "Unknown";
}

}  // namespace nil
