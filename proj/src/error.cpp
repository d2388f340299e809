#include "nnts/error.hpp"

namespace nnts {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoRealSolution: return "NoRealSolution";
    case ErrorKind::SolverDivergence: return "SolverDivergence";
    case ErrorKind::NotADensity: return "NotADensity";
    case ErrorKind::FactorizationUnstable: return "FactorizationUnstable";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::FitFailure: return "FitFailure";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::UnsupportedAlpha: return "UnsupportedAlpha";
    case ErrorKind::CriticalValueUnavailable: return "CriticalValueUnavailable";
    case ErrorKind::HarnessError: return "HarnessError";
    case ErrorKind::RegressionError: return "RegressionError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Error";
}

}  // namespace nnts
