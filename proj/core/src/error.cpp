#include "uwb/error.hpp"

namespace uwb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UndersampledPulse: return "UndersampledPulse";
    case ErrorCode::ZeroEnergyWaveform: return "ZeroEnergyWaveform";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::MismatchedNc: return "MismatchedNc";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::DegenerateRealization: return "DegenerateRealization";
    case ErrorCode::InvalidDistance: return "InvalidDistance";
    case ErrorCode::SyncNotFound: return "SyncNotFound";
    case ErrorCode::NotSynchronized: return "NotSynchronized";
    case ErrorCode::PilotMissingSymbol: return "PilotMissingSymbol";
    case ErrorCode::TargetNotBracketed: return "TargetNotBracketed";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::GridMismatch: return "GridMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace uwb
