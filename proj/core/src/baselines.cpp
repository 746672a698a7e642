#include "pikm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace pikm {

namespace {

Nanos slots_to_nanos(long double slots, Nanos d_sl) {
  if (!(slots > 0) || slots * static_cast<long double>(d_sl) > 9.0e18L)
    fail(ErrorCode::EtaOutOfRange, "slotted latency out of range");
  return static_cast<Nanos>(std::llroundl(slots * d_sl));
}

/// floor() that tolerates a one-ulp undershoot from the binary encoding of
/// decimal duty-cycles, so floor(2/0.01) stays 200.
long double floor_eta_ratio(long double x) {
  return std::floor(x * (1.0L + 1e-12L));
}

long double lightning_slots(double eta, double beta, double delta) {
  // Published approximation for the optimal beacon count, rounded to the
  // nearest positive integer before evaluating the bound.
  long double n_approx =
      (0.0021L * std::sqrt(25600.0L * eta + 2109.0L) + 0.095L) / eta;
  long double n = std::max<long double>(1.0L, std::roundl(n_approx));
  long double num = n * (1 + delta) + (n - 1) * delta * beta + 1 + 2 * delta;
  long double den = eta -
                    ((1 - delta) * beta + delta) / (2 * n * (n + 1)) -
                    (delta + beta * (1 - delta)) / (2 * (n + 1));
  if (!(den > 0))
    fail(ErrorCode::EtaOutOfRange, "lightning bound undefined at this eta");
  return num / den;
}

long double g_nihao_slots(double eta, double gamma, Nanos d_a, Nanos d_sl) {
  long double A = (static_cast<long double>(d_sl) + gamma * d_a) /
                  (2 * gamma * eta * d_sl);
  long double inner = A - static_cast<long double>(d_a) / d_sl;
  if (!(inner > 0))
    fail(ErrorCode::EtaOutOfRange, "g-nihao bound undefined at this eta");
  long double root = A + std::sqrt(inner);
  return root * root * gamma;
}

}  // namespace

Nanos slotted_latency(const SlottedSpec& spec, double eta,
                      const RadioParams& radio) {
  radio.validate();
  spec.validate(radio.d_a);
  if (!(eta > 0) || !(eta < 1))
    fail(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1)");
  const Nanos d_sl = spec.d_sl;
  switch (spec.protocol) {
    case SlottedProtocol::DISCO:
      // p1 = p2 idealization of the coprime schedule.
      return slots_to_nanos(4.0L / (eta * (long double)eta), d_sl);
    case SlottedProtocol::UCONNECT: {
      long double r = std::sqrt(1.0L / (2 * eta) +
                                9.0L / (16 * eta * (long double)eta)) +
                      3.0L / (4 * eta);
      return slots_to_nanos(r * r, d_sl);
    }
    case SlottedProtocol::SEARCHLIGHT_S: {
      if (spec.searchlight_literal_entry) {
        long double slots = std::ceil(floor_eta_ratio(1.0L / eta) / 2.0L);
        return slots_to_nanos(slots, d_sl);
      }
      // Two active slots per period t, striped probing over t/2 positions:
      // the period-squared-over-four bound consistent with the protocol.
      long double t = floor_eta_ratio(2.0L / eta);
      if (t < 2)
        fail(ErrorCode::EtaOutOfRange, "searchlight needs eta <= 1");
      return slots_to_nanos(t * std::ceil(t / 4.0L), d_sl);
    }
    case SlottedProtocol::OPT_DIFFCODES:
      return slots_to_nanos(1.0L / (2 * eta * (long double)eta), d_sl);
    case SlottedProtocol::LIGHTNING:
      return slots_to_nanos(lightning_slots(eta, spec.beta, spec.delta), d_sl);
    case SlottedProtocol::G_NIHAO:
      return slots_to_nanos(
          g_nihao_slots(eta, spec.gamma_ratio, radio.d_a, d_sl), d_sl);
  }
  fail(ErrorCode::UnsupportedProtocol, "unknown slotted protocol");
}

Ratio slotted_collision_probability(Nanos d_a, Nanos d_sl) {
  if (d_a <= 0) fail(ErrorCode::InvalidParams, "d_a must be positive");
  if (d_sl < 3 * d_a)
    fail(ErrorCode::SlotTooShort, "slot shorter than the 3 d_a limit");
  Nanos d_listen = d_sl - 2 * d_a;
  Nanos num = 3 * d_a;
  Nanos den = 3 * d_a + d_listen;
  Nanos g = std::gcd(num, den);
  return Ratio{num / g, den / g};
}

double channel_utilization(UtilizationKind kind, const UtilizationParams& p) {
  switch (kind) {
    case UtilizationKind::PI_SYMMETRIC:
      if (p.t_a <= 0 || p.d_a <= 0)
        fail(ErrorCode::InvalidParams, "PI utilization needs t_a and d_a");
      return double(p.d_a) / double(p.t_a);
    case UtilizationKind::SLOTTED: {
      if (p.d_sl <= 0 || p.d_a <= 0 || !(p.eta > 0) || !(p.eta < 1))
        fail(ErrorCode::InvalidParams, "slotted utilization needs d_sl, eta");
      // A active slots per hyper-period of P slots with A/P = eta and two
      // beacons per active slot: Disco (A=2, P=2/eta), U-Connect
      // (A=p+(p+1)/2, P=p^2), Searchlight-S (A=t, P=t^2/2) all reduce to
      // the same airtime fraction.
      return 2.0 * double(p.d_a) * p.eta / double(p.d_sl);
    }
    case UtilizationKind::G_NIHAO: {
      if (p.d_sl <= 0 || p.d_a <= 0 || !(p.eta > 0) || p.gamma_ratio <= 0)
        fail(ErrorCode::InvalidParams, "g-nihao utilization needs d_sl, eta");
      // Period of gamma m^2 slots carrying gamma m beacons; m from the
      // duty-cycle: eta = (m d_sl + gamma m d_a) / (gamma m^2 d_sl).
      double m = (double(p.d_sl) + p.gamma_ratio * double(p.d_a)) /
                 (p.gamma_ratio * p.eta * double(p.d_sl));
      return double(p.d_a) / (m * double(p.d_sl));
    }
  }
  fail(ErrorCode::UnsupportedProtocol, "unknown utilization kind");
}

std::vector<GainSummary> gain_table(const std::vector<double>& eta_grid,
                                    const RadioParams& radio, Nanos d_sl) {
  if (eta_grid.empty())
    fail(ErrorCode::InvalidParams, "eta grid must not be empty");
  struct PiPoint {
    double eta;
    Nanos d_m;
    Nanos d_m_guarded;
  };
  std::vector<PiPoint> pi;
  pi.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    OptimizerRequest req;
    req.eta_target = eta;
    req.radio = radio;
    VariantSolution best = derive_best(req);
    VariantSolution guarded = apply_skew_guards(best, radio);
    pi.push_back({eta, best.d_m, guarded.d_m});
  }

  std::vector<GainSummary> table;
  for (SlottedProtocol proto :
       {SlottedProtocol::DISCO, SlottedProtocol::UCONNECT,
        SlottedProtocol::SEARCHLIGHT_S, SlottedProtocol::OPT_DIFFCODES,
        SlottedProtocol::LIGHTNING, SlottedProtocol::G_NIHAO}) {
    GainSummary summary;
    summary.protocol = proto;
    SlottedSpec spec;
    spec.protocol = proto;
    spec.d_sl = d_sl;
    double sum = 0.0, sum_guarded = 0.0;
    for (const PiPoint& point : pi) {
      Nanos slotted = slotted_latency(spec, point.eta, radio);
      GainRow row{point.eta, slotted, point.d_m,
                  double(slotted) / double(point.d_m)};
      GainRow guarded{point.eta, slotted, point.d_m_guarded,
                      double(slotted) / double(point.d_m_guarded)};
      sum += row.gain;
      sum_guarded += guarded.gain;
      summary.max_gain = std::max(summary.max_gain, row.gain);
      summary.max_gain_guarded =
          std::max(summary.max_gain_guarded, guarded.gain);
      summary.rows.push_back(row);
      summary.rows_guarded.push_back(guarded);
    }
    summary.mean_gain = sum / double(pi.size());
    summary.mean_gain_guarded = sum_guarded / double(pi.size());
    table.push_back(std::move(summary));
  }
  return table;
}

GranularityStudy granularity_study(double eta_min, double eta_max, double step,
                                   const RadioParams& radio, Nanos d_sl,
                                   double gamma_ratio) {
  if (!(eta_min > 0) || !(eta_max < 1) || eta_min > eta_max)
    fail(ErrorCode::EtaOutOfRange, "need 0 < eta_min <= eta_max < 1");
  if (!(step > 0) && eta_min != eta_max)
    fail(ErrorCode::InvalidParams, "step must be positive");

  GranularityStudy study;
  std::set<std::int64_t> m_values;
  for (double eta = eta_min; eta <= eta_max + 1e-12;
       eta += (step > 0 ? step : 1.0)) {
    OptimizerRequest req;
    req.eta_target = eta;
    req.radio = radio;
    VariantSolution best = derive_best(req);
    study.pi.push_back({eta, best.eta_achieved});

    double m_real = (double(d_sl) + gamma_ratio * double(radio.d_a)) /
                    (gamma_ratio * eta * double(d_sl));
    std::int64_t m = std::max<std::int64_t>(1, std::llround(m_real));
    m_values.insert(m);
    if (eta_min == eta_max) break;
  }
  for (auto it = m_values.rbegin(); it != m_values.rend(); ++it) {
    double realized = (double(d_sl) + gamma_ratio * double(radio.d_a)) /
                      (gamma_ratio * double(*it) * double(d_sl));
    study.g_nihao.push_back(realized);
  }
  return study;
}

}  // namespace pikm
