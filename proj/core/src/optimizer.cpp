#include "pikm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pikm/latency.hpp"

namespace pikm {

namespace {

using std::sqrt;

std::string fmt_eta(double eta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", eta);
  return buf;
}

Nanos ceil_to_nanos(long double value) {
  if (!(value > 0) || value > 9.0e18L)
    fail(ErrorCode::RangesEmpty, "derived duration out of range");
  return static_cast<Nanos>(std::ceil(value));
}

std::int64_t round_half_away(long double v) {
  return static_cast<std::int64_t>(std::llroundl(v));
}

/// Scan interval hitting the ceiling boundary from below, with the extra
/// few nanoseconds shaved so that k divides T_s + usable exactly. That keeps
/// T_a integral and gamma pinned at the usable width.
struct FamilyIntervals {
  Nanos t_s;
  Nanos t_a;
  Nanos eps_effective;
};

FamilyIntervals family_intervals(std::int64_t k, std::int64_t M, Nanos usable,
                                 Nanos eps) {
  Nanos t_s = (k * (M + 1) - 1) * usable - eps;
  Nanos align = (t_s + usable) % k;
  t_s -= align;
  Nanos t_a = (t_s + usable) / k;
  return {t_s, t_a, eps + align};
}

VariantSolution finish(Variant variant, std::int64_t k, std::int64_t M,
                       Nanos d_s, Nanos t_a, Nanos t_s,
                       const OptimizerRequest& req, Nanos eps, Nanos eps_ta,
                       std::vector<std::string> clamped,
                       std::vector<std::string> warnings) {
  VariantSolution sol;
  sol.variant = variant;
  sol.k = k;
  sol.M = M;
  sol.config = PiConfig{t_a, t_s, d_s, req.radio.d_a};
  sol.config.validate();
  sol.eps = eps;
  sol.eps_ta = eps_ta;
  sol.eta_achieved = duty_cycle(sol.config);
  sol.d_m = variant_bound(variant, k, M, sol.config);
  sol.clamped = std::move(clamped);
  sol.warnings = std::move(warnings);
  if (sol.config.d_s < req.radio.d_s_min)
    fail(ErrorCode::RangesEmpty,
         "derived scan window fell below the hardware minimum");
  return sol;
}

}  // namespace

void OptimizerRequest::validate() const {
  radio.validate();
  if (!(eta_target > 0.0) || !(eta_target < 1.0))
    fail(ErrorCode::EtaOutOfRange, "eta_target must lie in (0, 1)");
  if (eps < 1) fail(ErrorCode::InvalidParams, "eps must be >= 1 ns");
}

EtaLimits eta_limits(Variant variant, const RadioParams& radio) {
  radio.validate();
  const long double a = radio.d_a;
  const long double s = radio.d_s_min;
  EtaLimits lim;
  switch (variant) {
    case Variant::PI0M: {
      lim.eta_max = double((a + std::sqrt(a * s)) / (s - a));
      // Largest eta for which M gets pulled at most one step below its
      // optimum by the hardware bound: the smaller root of
      // eta^2 (s-a) - eta (s-a) + 2a = 0. Beyond the discriminant there is
      // no such threshold and the cap is eta_max itself.
      long double disc = 1.0L - 8.0L * a / (s - a);
      if (disc > 0)
        lim.eta_adj = std::min(lim.eta_max,
                               double((1.0L - std::sqrt(disc)) / 2.0L));
      else
        lim.eta_adj = lim.eta_max;
      break;
    }
    case Variant::PIK1P:
      lim.eta_max =
          double((3 * a + std::sqrt(a * (a + 8 * s))) / (8 * (s - a)));
      break;
    case Variant::PIK2P:
      lim.eta_max =
          double((3 * a + std::sqrt(a * (a + 8 * s))) / (12 * (s - a)));
      break;
  }
  return lim;
}

VariantSolution derive_pi0m(const OptimizerRequest& req) {
  req.validate();
  const long double eta = req.eta_target;
  const long double a = req.radio.d_a;
  const long double s = req.radio.d_s_min;

  EtaLimits lim = eta_limits(Variant::PI0M, req.radio);
  if (req.eta_target > lim.eta_max)
    fail(ErrorCode::InfeasibleEta,
         "eta_target " + fmt_eta(req.eta_target) + " exceeds eta_max(PI0M) = " +
             fmt_eta(lim.eta_max) +
             " from (d_a + sqrt(d_a d_s_min)) / (d_s_min - d_a)");

  std::vector<std::string> clamped;
  std::vector<std::string> warnings;
  if (lim.eta_adj && req.eta_target > *lim.eta_adj)
    warnings.push_back("eta_target above eta_adj = " + fmt_eta(*lim.eta_adj) +
                       ", integer clamping degrades the bound");

  const long double m_opt = (std::sqrt(1.0L - eta * eta) + 1.0L) / eta - 1.0L;
  const long double m_min = 1.0L / eta - 1.0L;
  const bool upper_regime = eta > a / (s - a);
  long double m_max = 0.0L;
  if (upper_regime)
    m_max = (s * (eta - 1) - a * (eta + 1)) / (a * (eta + 1) - eta * s);

  std::int64_t M = round_half_away(m_opt);
  if (upper_regime && static_cast<long double>(M) > m_max) {
    M = static_cast<std::int64_t>(std::floor(m_max));
    clamped.push_back("M_max");
  }
  std::int64_t lowest = static_cast<std::int64_t>(std::floor(m_min)) + 1;
  lowest = std::max<std::int64_t>(lowest, 1);
  if (M < lowest) {
    M = lowest;
    clamped.push_back("M_min");
  }
  if (upper_regime && M > m_max)
    fail(ErrorCode::RangesEmpty, "no integer M between M_min and M_max");
  if (!upper_regime && static_cast<long double>(M) <
                           (s * (eta - 1) - a * (eta + 1)) /
                               (a * (eta + 1) - eta * s))
    fail(ErrorCode::RangesEmpty, "hardware lower bound on M not met");

  Nanos d_s = ceil_to_nanos(a + a * (M + 2) / (eta * (M + 1) - 1.0L));
  Nanos usable = d_s - req.radio.d_a;
  Nanos t_a = usable;
  Nanos t_s = (M + 1) * usable - req.eps;
  if (t_s < d_s)
    fail(ErrorCode::RangesEmpty, "scan interval collapsed below the window");
  return finish(Variant::PI0M, 1, M, d_s, t_a, t_s, req, req.eps, 0,
                std::move(clamped), std::move(warnings));
}

VariantSolution derive_pik1(const OptimizerRequest& req) {
  req.validate();
  const long double eta = req.eta_target;
  const long double a = req.radio.d_a;
  const long double s = req.radio.d_s_min;

  EtaLimits lim = eta_limits(Variant::PIK1P, req.radio);
  if (req.eta_target > lim.eta_max)
    fail(ErrorCode::InfeasibleEta,
         "eta_target " + fmt_eta(req.eta_target) +
             " exceeds eta_max(PIK1P) = " + fmt_eta(lim.eta_max) +
             " from (3 d_a + sqrt(d_a (d_a + 8 d_s_min))) / (8 (d_s_min - d_a))");

  std::vector<std::string> clamped;
  const long double k_opt =
      (1.0L + std::sqrt((1.0L - eta) * (1.0L + 2 * eta))) / (2 * eta) + 0.5L;
  std::int64_t k_lo =
      static_cast<std::int64_t>(std::floor(1.0L / (2 * eta) + 0.5L)) + 1;
  k_lo = std::max<std::int64_t>(k_lo, 2);

  // d_s(k) falls with k; once the hardware window floor binds, it caps k.
  std::int64_t k_hi = 0;
  bool has_hi = 2 * s * eta - a * (1 + 2 * eta) > 0;
  if (has_hi) {
    long double k_l = (2 * s * (1 + eta) - a * (1 + 2 * eta)) /
                      (4 * eta * s - 2 * a * (1 + 2 * eta));
    k_hi = static_cast<std::int64_t>(std::floor(k_l));
    if (k_lo > k_hi)
      fail(ErrorCode::RangesEmpty, "no integer k satisfies both k bounds");
  }

  std::int64_t k = round_half_away(k_opt);
  if (k < k_lo) {
    k = k_lo;
    clamped.push_back("k_min");
  }
  if (has_hi && k > k_hi) {
    k = k_hi;
    clamped.push_back("d_s_min");
  }

  // Duty-cycle inversion of this family: eta = d_s/T_s + d_a/T_a with
  // T_s = (2k-1)(d_s-d_a) and T_a = 2(d_s-d_a) gives, solved for d_s,
  // d_s = d_a (2k-1)(1+2 eta) / (2 eta (2k-1) - 2).
  const long double u = 2 * k - 1;
  Nanos d_s =
      ceil_to_nanos(a * u * (1 + 2 * eta) / (2 * eta * u - 2.0L));
  Nanos usable = d_s - req.radio.d_a;
  FamilyIntervals iv = family_intervals(k, 1, usable, req.eps);
  return finish(Variant::PIK1P, k, 1, d_s, iv.t_a, iv.t_s, req,
                iv.eps_effective, 0, std::move(clamped), {});
}

VariantSolution derive_pik2(const OptimizerRequest& req) {
  req.validate();
  const long double eta = req.eta_target;
  const long double a = req.radio.d_a;
  const long double s = req.radio.d_s_min;
  const std::int64_t M = 2;

  EtaLimits lim = eta_limits(Variant::PIK2P, req.radio);
  if (req.eta_target > lim.eta_max)
    fail(ErrorCode::InfeasibleEta,
         "eta_target " + fmt_eta(req.eta_target) +
             " exceeds eta_max(PIK2P) = " + fmt_eta(lim.eta_max) +
             " from (3 d_a + sqrt(d_a (d_a + 8 d_s_min))) / (12 (d_s_min - d_a))");

  std::vector<std::string> clamped;
  const long double k_opt =
      1.0L / (M + 1) +
      (std::sqrt((1.0L - eta) * (eta * (M + 1) + 1)) + 1.0L) / (eta * (M + 1));
  const long double k_min = (eta + 1) / (eta * (M + 1));
  std::int64_t k_lo = static_cast<std::int64_t>(std::floor(k_min)) + 1;
  k_lo = std::max<std::int64_t>(k_lo, 2);

  std::int64_t k_hi = 0;
  bool has_hi = 3 * s * eta - a * (1 + 3 * eta) > 0;
  if (has_hi) {
    long double k_max = s / (3 * eta * s - a * (1 + 3 * eta)) + 1.0L / 3.0L;
    k_hi = static_cast<std::int64_t>(std::ceil(k_max)) - 1;
    if (k_lo > k_hi)
      fail(ErrorCode::RangesEmpty, "no integer k between k_min and k_max");
  }

  std::int64_t k = round_half_away(k_opt);
  if (k < k_lo) {
    k = k_lo;
    clamped.push_back("k_min");
  }
  if (has_hi && k > k_hi) {
    k = k_hi;
    clamped.push_back("k_max");
  }

  // One rational expression for d_s, linear inversion of the family's
  // duty-cycle: d_s = d_a (3k-1)(1+3 eta) / (3 (eta (3k-1) - 1)).
  const long double u = 3 * k - 1;
  Nanos d_s = ceil_to_nanos(a * u * (1 + 3 * eta) / (3 * (eta * u - 1.0L)));
  Nanos usable = d_s - req.radio.d_a;
  FamilyIntervals iv = family_intervals(k, M, usable, req.eps);
  return finish(Variant::PIK2P, k, M, d_s, iv.t_a, iv.t_s, req,
                iv.eps_effective, 0, std::move(clamped), {});
}

VariantSolution derive_best(const OptimizerRequest& req) {
  req.validate();
  std::optional<VariantSolution> best;
  std::string reasons;
  auto consider = [&](VariantSolution (*derive)(const OptimizerRequest&)) {
    try {
      VariantSolution sol = derive(req);
      if (!best || sol.d_m < best->d_m) best = std::move(sol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InfeasibleEta &&
          e.code() != ErrorCode::RangesEmpty)
        throw;
      reasons += std::string(reasons.empty() ? "" : "; ") + e.what();
    }
  };
  consider(&derive_pi0m);
  consider(&derive_pik1);
  consider(&derive_pik2);
  if (!best) fail(ErrorCode::InfeasibleEta, "no variant feasible: " + reasons);
  return *best;
}

VariantSolution apply_skew_guards(const VariantSolution& sol,
                                  const RadioParams& radio) {
  radio.validate();
  sol.config.validate();
  if (!sol.config.scans() || !sol.config.advertises())
    fail(ErrorCode::InvalidConfig, "skew guards need a symmetric schedule");

  const Nanos t_s = *sol.config.t_s;
  // Both clocks may drift in opposing directions over one scan interval.
  Nanos drift = ceil_div(2 * radio.skew_ppm * t_s, 1'000'000);
  Nanos guard = drift > 0 ? round_up_to(drift, radio.tick) : 0;
  Nanos eps_new = std::max<Nanos>(guard, radio.tick);
  Nanos eps_ta = guard;

  Nanos width = sol.config.d_s - sol.config.d_a;
  if (eps_ta >= width)
    fail(ErrorCode::GuardExceedsWindow,
         "skew guard " + format_duration(eps_ta) +
             " does not fit into the usable window " + format_duration(width));

  Nanos usable = width - eps_ta;
  VariantSolution guarded = sol;
  guarded.eps = eps_new;
  guarded.eps_ta = eps_ta;
  if (sol.variant == Variant::PI0M) {
    guarded.config.t_a = usable;
    guarded.config.t_s = (sol.M + 1) * usable - eps_new;
  } else {
    FamilyIntervals iv = family_intervals(sol.k, sol.M, usable, eps_new);
    guarded.config.t_a = iv.t_a;
    guarded.config.t_s = iv.t_s;
    guarded.eps = iv.eps_effective;
  }
  guarded.config.validate();
  guarded.eta_achieved = duty_cycle(guarded.config);
  guarded.d_m = variant_bound(guarded.variant, guarded.k, guarded.M,
                              guarded.config);
  return guarded;
}

std::pair<PiConfig, PiConfig> one_way_split(const VariantSolution& sol) {
  sol.config.validate();
  PiConfig advertiser = sol.config;
  advertiser.t_s.reset();
  PiConfig scanner = sol.config;
  scanner.t_a.reset();
  return {advertiser, scanner};
}

}  // namespace pikm
