#pragma once

#include <cstdint>
#include <vector>

#include "pikm/model.hpp"
#include "pikm/optimizer.hpp"
#include "pikm/time.hpp"

namespace pikm {

/// Exact reduced fraction, used where a probability must be checked as a
/// rational rather than a rounded double.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return double(num) / double(den); }
};

/// Worst-case discovery latency of a slotted baseline at duty-cycle eta.
Nanos slotted_latency(const SlottedSpec& spec, double eta,
                      const RadioParams& radio);

/// Collision probability of two-beacon slots: 3 d_a / (3 d_a + d_listen)
/// with d_listen = d_sl - 2 d_a, the in-slot listening span between the two
/// beacons. Requires d_sl >= 3 d_a.
Ratio slotted_collision_probability(Nanos d_a, Nanos d_sl);

enum class UtilizationKind { PI_SYMMETRIC, SLOTTED, G_NIHAO };

struct UtilizationParams {
  Nanos t_a = 0;            ///< PI_SYMMETRIC: advertising interval
  Nanos d_a = 0;            ///< beacon airtime
  Nanos d_sl = 0;           ///< slotted kinds: slot length
  double eta = 0.0;         ///< slotted kinds: duty-cycle
  double gamma_ratio = 2.0; ///< G_NIHAO: beacons per listen slot
};

/// Transmit airtime fraction of one device. Slotted schedules send two
/// beacons per active slot, so u = 2 d_a eta / d_sl regardless of which
/// schedule places the active slots. G-Nihao sends gamma m beacons per
/// period of gamma m^2 slots, giving u = d_a / (m d_sl).
double channel_utilization(UtilizationKind kind, const UtilizationParams& p);

struct GainRow {
  double eta = 0.0;
  Nanos d_m_slotted = 0;
  Nanos d_m_pikm = 0;
  double gain = 0.0;
};

struct GainSummary {
  SlottedProtocol protocol = SlottedProtocol::DISCO;
  double mean_gain = 0.0;
  double max_gain = 0.0;
  double mean_gain_guarded = 0.0;
  double max_gain_guarded = 0.0;
  std::vector<GainRow> rows;          ///< per grid point, unguarded
  std::vector<GainRow> rows_guarded;  ///< per grid point, skew-guarded
};

/// Gain of the best PI variant over each baseline, G = d_m,slotted /
/// d_m,PI-kMOpt, across the eta grid, plus the same with skew guards
/// applied to the PI side.
std::vector<GainSummary> gain_table(const std::vector<double>& eta_grid,
                                    const RadioParams& radio, Nanos d_sl);

struct GranularityStudy {
  struct Target {
    double target = 0.0;
    double achieved = 0.0;
  };
  std::vector<Target> pi;            ///< one row per target
  std::vector<double> g_nihao;       ///< distinct realizable duty-cycles
};

/// Sweeps target duty-cycles and reports what the PI optimizer achieves per
/// target against the finite set G-Nihao can realize once its listen-slot
/// count m is rounded to an integer.
GranularityStudy granularity_study(double eta_min, double eta_max, double step,
                                   const RadioParams& radio, Nanos d_sl,
                                   double gamma_ratio = 2.0);

}  // namespace pikm
