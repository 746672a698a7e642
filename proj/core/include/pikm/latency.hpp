#pragma once

#include "pikm/model.hpp"
#include "pikm/time.hpp"

namespace pikm {

enum class ProcessDirection { SHRINK, GROW, NONE };

std::string to_string(ProcessDirection d);

enum class BoundSource { CLOSED_FORM, SWEEP_ORACLE };

/// Worst-case discovery latency together with the process class that
/// produced it. Order 0 means the beacon grid alone sweeps every window
/// (T_a <= d_s - d_a); order 1 means the residual offset walks in steps of
/// gamma until it lands.
struct LatencyBound {
  Nanos d_m = 0;
  int order = 0;
  ProcessDirection direction = ProcessDirection::NONE;
  BoundSource source = BoundSource::CLOSED_FORM;
};

/// d_m = ceil((T_s - d_s + d_a) / T_a) * T_a + d_a for order-0 schedules.
/// Requires T_a <= d_s - d_a; throws OrderViolation otherwise.
LatencyBound worst_case_order0(const PiConfig& cfg);

/// Order-1 bound for shrinking offsets:
/// ceil((T_s - T_a)/T_a) T_a + ceil((T_a - (d_s - d_a))/gamma) floor(T_s/T_a) T_a + d_a.
LatencyBound worst_case_order1_shrink(const PiConfig& cfg);

/// Order-1 bound for growing offsets:
/// ceil((T_s + d_s - d_a)/T_a - 1) T_a + ceil((T_a - d_s + d_a)/gamma) ceil(T_s/T_a) T_a + d_a.
/// On PI-kM+ schedules this form is conservative by exactly one T_a over the
/// family closed form; both dominate the exhaustive offset sweep.
LatencyBound worst_case_order1_grow(const PiConfig& cfg);

/// Heuristic shrink/grow classification for arbitrary order-1 schedules from
/// the residue of T_s modulo T_a. For constructed families the variant
/// dictates the case; the offset-sweep oracle is authoritative otherwise.
ProcessDirection classify_direction(Nanos t_a, Nanos t_s);

/// Closed-form bound of the PI-kM+ family for parameters (k, M, d_s):
///   k = 1:  (M-1) ((M+1)(d_s-d_a) - eps) + d_a
///   else:   (k(M+1)(d_s-d_a) - eps) (k(M+1)-2) / k + d_a
/// The division by k happens before rounding; the result rounds up to the
/// next nanosecond so the bound stays conservative.
Nanos pi_km_closed_form(std::int64_t k, std::int64_t M, Nanos d_s,
                        const RadioParams& radio, Nanos eps);

/// Closed-form bound of the PI-0M family: M (d_s - d_a) + d_a. The final
/// d_a accounts for the beacon that completes the worst-case reception.
Nanos pi0m_closed_form(std::int64_t M, Nanos d_s, const RadioParams& radio);

/// The bound matching a solution's variant, evaluated on its actual
/// schedule. PI0M and PIK1P use the general order-0/shrink forms (exact for
/// these constructions, guards included); PIK2P uses (k(M+1)-2) T_a + d_a,
/// the tight form the family closed form reduces to on constructed
/// schedules and the one the sweep oracle confirms.
Nanos variant_bound(Variant variant, std::int64_t k, std::int64_t M,
                    const PiConfig& cfg);

}  // namespace pikm
