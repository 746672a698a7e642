#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pikm/model.hpp"
#include "pikm/time.hpp"

namespace pikm {

/// Explicit event streams of one device over a finite horizon. Beacon k
/// fires at offset + round(k * T_a * (1 + ppm 1e-6)); the multiplicative
/// indexing keeps cumulative drift exact instead of accumulating per-step
/// rounding. Window width stays d_s; a beacon due inside an own window
/// interrupts scanning for d_a without extending the window.
struct Timeline {
  std::vector<Nanos> beacons;                        ///< transmit starts
  std::vector<std::pair<Nanos, Nanos>> windows;      ///< [start, end)
  std::int64_t skew_ppm = 0;
};

Timeline build_timeline(const PiConfig& cfg, Nanos offset,
                        std::int64_t skew_ppm, Nanos horizon);

/// Result of one simulated encounter. Latencies are measured from the
/// instant both devices are active; the *_from_start fields keep the other
/// common convention (from the first device's activation) for reference.
/// Absent latency means the horizon was exceeded.
struct SimOutcome {
  std::optional<Nanos> latency_ab;   ///< A's beacon received by B
  std::optional<Nanos> latency_ba;   ///< B's beacon received by A
  std::optional<Nanos> latency_ab_from_start;
  std::optional<Nanos> latency_ba_from_start;
  std::int64_t collisions = 0;       ///< overlapping transmission pairs
  Nanos offset_a = 0;
  Nanos offset_b = 0;
};

struct PairOptions {
  Nanos offset_a = 0;
  std::int64_t skew_a_ppm = 0;
  std::int64_t skew_b_ppm = 0;
  /// Physical channel semantics: any temporal overlap of two transmissions
  /// destroys both receptions, and a device cannot receive while it
  /// transmits. Off = idealized analysis where windows are fully available.
  bool collisions = true;
  Nanos horizon = 0;
};

SimOutcome simulate_pair(const PiConfig& cfg_a, const PiConfig& cfg_b,
                         Nanos offset_b, const PairOptions& opts);

struct SweepOptions {
  /// Sample every offset of the form (k T_a - m T_s) mod T_s and one
  /// nanosecond around it in addition to the uniform grid. Latency is
  /// piecewise constant between those points, so the sweep becomes exact.
  bool refine_breakpoints = true;
  Nanos horizon = 0;  ///< 0 = derive from the closed-form bound
};

/// Exhaustive one-direction offset sweep of a symmetric pair under the
/// idealized semantics (no collisions). Returns the latency distribution
/// over a uniform initial offset in [0, T_s), with the exact worst case and
/// mean when breakpoint refinement is on.
CdfCurve sweep_offsets(const PiConfig& cfg, Nanos step,
                       const SweepOptions& opts = {});

struct MonteCarloOptions {
  bool collisions = true;
  std::int64_t skew_ppm_range = 0;  ///< per-device skew uniform in +-range
  Nanos horizon = 30 * kNanosPerSecond;
};

/// Repeated random encounters: both offsets uniform on [0, T_s), per-device
/// skew uniform on the given range. Per-trial RNG streams derive from
/// (seed, trial index), so results are byte-identical regardless of the
/// number of worker threads.
std::vector<SimOutcome> monte_carlo(const PiConfig& cfg, std::int64_t trials,
                                    std::uint64_t seed,
                                    const MonteCarloOptions& opts);

}  // namespace pikm
