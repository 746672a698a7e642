#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace pikm {

/// All schedule arithmetic runs on signed 64-bit nanosecond counts. There is
/// no floating-point time type anywhere in the library; ceilings and floors
/// in the latency formulas must never flip due to rounding noise.
using Nanos = std::int64_t;

/// An interval that may be switched off entirely (a device that never
/// advertises or never scans). Encoded as an absent optional rather than a
/// large magic number so every consumer has to branch explicitly.
using Interval = std::optional<Nanos>;

inline constexpr Nanos kNanosPerMicro = 1'000;
inline constexpr Nanos kNanosPerMilli = 1'000'000;
inline constexpr Nanos kNanosPerSecond = 1'000'000'000;

/// One step of a 32.768 kHz sleep clock, rounded up to whole nanoseconds.
/// This is the default guard decrement applied below every ceiling boundary
/// and the granularity used when sizing skew guards.
inline constexpr Nanos kSleepClockTick = 30'518;

/// Ceiling division for b > 0, exact for negative numerators as well.
/// A quotient that is already an integer does not round up.
constexpr Nanos ceil_div(Nanos a, Nanos b) {
  return a >= 0 ? (a + b - 1) / b : a / b;
}

/// Floor division for b > 0.
constexpr Nanos floor_div(Nanos a, Nanos b) {
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

/// Smallest multiple of `unit` that is >= a (a >= 0, unit > 0).
constexpr Nanos round_up_to(Nanos a, Nanos unit) {
  return ceil_div(a, unit) * unit;
}

std::string format_duration(Nanos ns);

/// Parses duration literals with a mandatory unit suffix: "368us", "10ms",
/// "1.5s", "30518ns". Bare numbers are rejected so a forgotten unit cannot
/// silently change scale by three orders of magnitude.
Nanos parse_duration(const std::string& text);

enum class ErrorCode {
  InvalidConfig,
  InvalidParams,
  InvalidOffset,
  InfeasibleEta,
  RangesEmpty,
  OrderViolation,
  WrongDirection,
  GuardExceedsWindow,
  UnsupportedProtocol,
  EtaOutOfRange,
  StepTooCoarse,
  SlotTooShort,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace pikm
