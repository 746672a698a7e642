#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pikm/time.hpp"

namespace pikm {

/// Radio hardware profile. Defaults follow a 1 Mbit/s short-range radio
/// sending 46-byte discovery beacons with a 32.768 kHz sleep clock:
/// d_a = 368 us, minimum scan window 10 ms, 20 ppm crystal.
struct RadioParams {
  Nanos d_a = 368 * kNanosPerMicro;       ///< beacon airtime
  Nanos d_s_min = 10 * kNanosPerMilli;    ///< smallest supported scan window
  Nanos tick = kSleepClockTick;           ///< sleep-clock granularity
  std::int64_t skew_ppm = 20;             ///< max per-device clock deviation
  std::int64_t n_bytes = 46;              ///< beacon payload, bytes
  std::int64_t bitrate = 1'000'000;       ///< over-the-air rate, bit/s

  void validate() const;
};

/// Beacon airtime for a payload of n_bytes at the given bitrate, rounded up
/// to whole nanoseconds.
Nanos beacon_duration(std::int64_t n_bytes, std::int64_t bitrate);

/// One device's slotless schedule: beacons every t_a, scan windows of width
/// d_s every t_s. Either interval may be absent for one-way roles (a pure
/// advertiser never scans, a pure scanner never advertises).
struct PiConfig {
  Interval t_a;
  Interval t_s;
  Nanos d_s = 0;
  Nanos d_a = 0;

  bool advertises() const { return t_a.has_value(); }
  bool scans() const { return t_s.has_value(); }

  void validate() const;
};

enum class Variant { PI0M, PIK1P, PIK2P };

std::string to_string(Variant v);

/// Optimizer output: the integer family parameters, the constructed
/// schedule, and the bound/duty-cycle actually achieved by that schedule.
struct VariantSolution {
  Variant variant = Variant::PI0M;
  std::int64_t k = 1;   ///< beacons per scan interval (1 for PI-0M)
  std::int64_t M = 1;   ///< ceiling index of the scan interval
  PiConfig config;
  Nanos eps = kSleepClockTick;      ///< decrement baked into t_s
  Nanos eps_ta = 0;                 ///< decrement applied to the usable width
  double eta_achieved = 0.0;        ///< recomputed from config, never cached
  Nanos d_m = 0;                    ///< worst-case discovery latency
  std::vector<std::string> clamped;   ///< constraints that moved k or M
  std::vector<std::string> warnings;  ///< non-fatal conditions (e.g. eta_adj)
};

enum class SlottedProtocol {
  DISCO,
  UCONNECT,
  SEARCHLIGHT_S,
  OPT_DIFFCODES,
  LIGHTNING,
  G_NIHAO,
};

std::string to_string(SlottedProtocol p);

/// A slotted baseline and its free parameters. Lightning uses the published
/// beta/delta defaults; G-Nihao sends gamma_ratio beacons per listen slot.
struct SlottedSpec {
  SlottedProtocol protocol = SlottedProtocol::DISCO;
  Nanos d_sl = 10 * kNanosPerMilli;
  double beta = 0.1;          ///< Lightning only
  double delta = 0.1;         ///< Lightning only
  double gamma_ratio = 2.0;   ///< G-Nihao only
  /// Evaluate the Searchlight row exactly as tabulated in its source instead
  /// of the period-squared form consistent with the protocol's own bound.
  bool searchlight_literal_entry = false;

  void validate(Nanos d_a) const;
};

/// Latency distribution over the initial offset, uniform prior on [0, T_s).
struct CdfCurve {
  struct Point {
    Nanos latency = 0;
    double cum_prob = 0.0;
  };
  std::vector<Point> points;
  Nanos worst_case = 0;
  double mean = 0.0;
};

/// Joint duty-cycle of the schedule: (T_a d_s + T_s d_a) / (T_a T_s),
/// evaluated as an exact rational before the single conversion to double.
/// With t_s absent it degenerates to d_a/T_a, with t_a absent to d_s/T_s.
double duty_cycle(const PiConfig& cfg);

/// Offset shrink per large-interval step of the order-1 process:
/// ceil(T_s/T_a) * T_a - T_s, for 0 < T_a <= T_s. Always in [0, T_a).
Nanos gamma_step(Nanos t_a, Nanos t_s);

}  // namespace pikm
