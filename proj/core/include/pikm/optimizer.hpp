#pragma once

#include <optional>
#include <utility>

#include "pikm/model.hpp"
#include "pikm/time.hpp"

namespace pikm {

struct OptimizerRequest {
  double eta_target = 0.01;
  RadioParams radio;
  Nanos eps = kSleepClockTick;  ///< guard decrement below ceiling boundaries

  void validate() const;
};

/// Duty-cycle ceiling of a variant for a given radio. For PI-0M, eta_adj is
/// the lower threshold above which the integer parameters get pulled more
/// than one step off their unconstrained optimum; solutions beyond it are
/// still computable but flagged.
struct EtaLimits {
  double eta_max = 0.0;
  std::optional<double> eta_adj;
};

EtaLimits eta_limits(Variant variant, const RadioParams& radio);

/// Order-0 family: T_a = d_s - d_a, T_s = (M+1)(d_s - d_a) - eps.
VariantSolution derive_pi0m(const OptimizerRequest& req);

/// Shrink family (M = 1): T_s = (2k-1)(d_s - d_a) - eps, T_a = (T_s + d_s - d_a)/k.
VariantSolution derive_pik1(const OptimizerRequest& req);

/// Grow family (M = 2): T_s = (3k-1)(d_s - d_a) - eps, T_a = (T_s + d_s - d_a)/k.
VariantSolution derive_pik2(const OptimizerRequest& req);

/// Best feasible variant by worst-case latency; ties break toward the
/// earlier variant in {PI0M, PIK1P, PIK2P}.
VariantSolution derive_best(const OptimizerRequest& req);

/// Re-derives the schedule with guards sized for the actual clock skew:
/// eps = eps_Ta = 2 * skew_ppm * 1e-6 * T_s rounded up to a whole sleep tick
/// (floor of one tick), the usable width shortened by eps_Ta so higher-order
/// processes cannot appear, and d_m recomputed from the guarded schedule.
VariantSolution apply_skew_guards(const VariantSolution& sol,
                                  const RadioParams& radio);

/// Splits a symmetric solution into the one-way roles: the advertiser keeps
/// t_a and never scans, the scanner keeps (t_s, d_s) and never advertises.
/// The two duty-cycles sum to the symmetric one exactly.
std::pair<PiConfig, PiConfig> one_way_split(const VariantSolution& sol);

}  // namespace pikm
