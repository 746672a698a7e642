#include "pikm/model.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace pikm {

namespace {

double ratio_to_double(__int128 num, __int128 den) {
  return static_cast<double>(static_cast<long double>(num) /
                             static_cast<long double>(den));
}

}  // namespace

std::string format_duration(Nanos ns) {
  auto emit = [](double v, const char* unit) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g%s", v, unit);
    return std::string(buf);
  };
  Nanos mag = ns < 0 ? -ns : ns;
  if (mag >= kNanosPerSecond) return emit(double(ns) / kNanosPerSecond, "s");
  if (mag >= kNanosPerMilli) return emit(double(ns) / kNanosPerMilli, "ms");
  if (mag >= kNanosPerMicro) return emit(double(ns) / kNanosPerMicro, "us");
  return std::to_string(ns) + "ns";
}

Nanos parse_duration(const std::string& text) {
  if (text.empty()) fail(ErrorCode::InvalidParams, "empty duration");
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidParams, "unparseable duration '" + text + "'");
  }
  std::string unit = text.substr(pos);
  Nanos scale = 0;
  if (unit == "ns") scale = 1;
  else if (unit == "us") scale = kNanosPerMicro;
  else if (unit == "ms") scale = kNanosPerMilli;
  else if (unit == "s") scale = kNanosPerSecond;
  else
    fail(ErrorCode::InvalidParams,
         "duration '" + text + "' needs a unit suffix (ns/us/ms/s)");
  double ns = value * double(scale);
  if (!(ns >= 0) || ns > 9.0e18)
    fail(ErrorCode::InvalidParams, "duration '" + text + "' out of range");
  return static_cast<Nanos>(std::llround(ns));
}

void RadioParams::validate() const {
  if (d_a <= 0) fail(ErrorCode::InvalidConfig, "d_a must be positive");
  if (d_s_min <= d_a)
    fail(ErrorCode::InvalidConfig, "d_s_min must exceed d_a");
  if (tick <= 0) fail(ErrorCode::InvalidConfig, "tick must be positive");
  if (skew_ppm < 0) fail(ErrorCode::InvalidConfig, "skew_ppm must be >= 0");
}

Nanos beacon_duration(std::int64_t n_bytes, std::int64_t bitrate) {
  if (n_bytes <= 0 || bitrate <= 0)
    fail(ErrorCode::InvalidParams, "payload and bitrate must be positive");
  return ceil_div(8 * n_bytes * kNanosPerSecond, bitrate);
}

void PiConfig::validate() const {
  if (d_a <= 0) fail(ErrorCode::InvalidConfig, "d_a must be positive");
  if (!advertises() && !scans())
    fail(ErrorCode::InvalidConfig, "both intervals absent");
  if (scans()) {
    if (d_s <= d_a)
      fail(ErrorCode::InvalidConfig, "scan window must exceed d_a");
    if (d_s > *t_s)
      fail(ErrorCode::InvalidConfig, "scan window longer than scan interval");
    if (*t_s <= 0) fail(ErrorCode::InvalidConfig, "t_s must be positive");
  }
  if (advertises() && *t_a <= d_a)
    fail(ErrorCode::InvalidConfig, "advertising interval must exceed d_a");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::PI0M: return "PI0M";
    case Variant::PIK1P: return "PIK1P";
    case Variant::PIK2P: return "PIK2P";
  }
  return "?";
}

std::string to_string(SlottedProtocol p) {
  switch (p) {
    case SlottedProtocol::DISCO: return "disco";
    case SlottedProtocol::UCONNECT: return "uconnect";
    case SlottedProtocol::SEARCHLIGHT_S: return "searchlight-s";
    case SlottedProtocol::OPT_DIFFCODES: return "opt-diffcodes";
    case SlottedProtocol::LIGHTNING: return "lightning";
    case SlottedProtocol::G_NIHAO: return "g-nihao";
  }
  return "?";
}

void SlottedSpec::validate(Nanos d_a) const {
  if (d_sl < 3 * d_a)
    fail(ErrorCode::SlotTooShort,
         "slot length below the fundamental 3*d_a limit");
  if (beta <= 0 || delta < 0 || gamma_ratio <= 0)
    fail(ErrorCode::InvalidParams, "slotted parameters out of range");
}

double duty_cycle(const PiConfig& cfg) {
  cfg.validate();
  if (!cfg.advertises() && !cfg.scans())
    fail(ErrorCode::InvalidConfig, "both intervals absent");
  if (!cfg.scans()) return ratio_to_double(cfg.d_a, *cfg.t_a);
  if (!cfg.advertises()) return ratio_to_double(cfg.d_s, *cfg.t_s);
  __int128 num = static_cast<__int128>(*cfg.t_a) * cfg.d_s +
                 static_cast<__int128>(*cfg.t_s) * cfg.d_a;
  __int128 den = static_cast<__int128>(*cfg.t_a) * *cfg.t_s;
  return ratio_to_double(num, den);
}

Nanos gamma_step(Nanos t_a, Nanos t_s) {
  if (t_a <= 0 || t_s < t_a)
    fail(ErrorCode::InvalidParams, "gamma_step requires 0 < t_a <= t_s");
  return ceil_div(t_s, t_a) * t_a - t_s;
}

}  // namespace pikm
