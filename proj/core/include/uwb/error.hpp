#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uwb {

enum class ErrorCode {
  UndersampledPulse,
  ZeroEnergyWaveform,
  InvalidParameter,
  MismatchedNc,
  InvalidConfig,
  SampleRateMismatch,
  DegenerateRealization,
  InvalidDistance,
  SyncNotFound,
  NotSynchronized,
  PilotMissingSymbol,
  TargetNotBracketed,
  SignalTooShort,
  GridMismatch,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uwb
