#include "pikm/simulator.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <map>
#include <thread>

#include "pikm/latency.hpp"

namespace pikm {

namespace {

Nanos scaled_event(Nanos base, std::int64_t index, std::int64_t ppm) {
  __int128 raw = static_cast<__int128>(base) * index * (1'000'000 + ppm);
  __int128 rounded = (raw + 500'000) / 1'000'000;
  return static_cast<Nanos>(rounded);
}

bool spans_overlap(Nanos a0, Nanos a1, Nanos b0, Nanos b1) {
  return a0 < b1 && b0 < a1;
}

/// First beacon of `tx` whose full span fits into a window of `rx` and, under
/// physical semantics, does not overlap any of rx's own transmissions.
std::optional<Nanos> first_reception(const Timeline& tx, const Timeline& rx,
                                     Nanos d_a, bool physical) {
  for (Nanos t : tx.beacons) {
    auto w = std::upper_bound(rx.windows.begin(), rx.windows.end(),
                              std::make_pair(t, std::numeric_limits<Nanos>::max()));
    if (w == rx.windows.begin()) continue;
    --w;
    if (!(w->first <= t && t + d_a <= w->second)) continue;
    if (physical) {
      auto b = std::lower_bound(rx.beacons.begin(), rx.beacons.end(), t - d_a);
      bool blocked = false;
      for (; b != rx.beacons.end() && *b < t + d_a; ++b) {
        if (spans_overlap(t, t + d_a, *b, *b + d_a)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
    }
    return t + d_a;
  }
  return std::nullopt;
}

std::int64_t count_collisions(const std::vector<Nanos>& a,
                              const std::vector<Nanos>& b, Nanos d_a) {
  std::int64_t n = 0;
  auto it = b.begin();
  for (Nanos t : a) {
    while (it != b.end() && *it + d_a <= t) ++it;
    for (auto jt = it; jt != b.end() && *jt < t + d_a; ++jt) ++n;
  }
  return n;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct TrialRng {
  std::uint64_t state;
  explicit TrialRng(std::uint64_t s) : state(s) {}
  std::uint64_t next() { return state = splitmix64(state); }
  /// Unbiased uniform draw in [0, n) by rejection.
  std::uint64_t bounded(std::uint64_t n) {
    std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }
  std::int64_t symmetric(std::int64_t range) {
    if (range == 0) return 0;
    return static_cast<std::int64_t>(bounded(2 * range + 1)) - range;
  }
};

}  // namespace

Timeline build_timeline(const PiConfig& cfg, Nanos offset,
                        std::int64_t skew_ppm, Nanos horizon) {
  cfg.validate();
  if (skew_ppm < -500 || skew_ppm > 500)
    fail(ErrorCode::InvalidParams, "skew_ppm outside +-500");
  if (horizon <= 0) fail(ErrorCode::InvalidParams, "horizon must be positive");
  if (offset < 0 || (cfg.scans() && offset >= *cfg.t_s))
    fail(ErrorCode::InvalidOffset, "offset must lie in [0, T_s)");

  Timeline tl;
  tl.skew_ppm = skew_ppm;
  if (cfg.advertises()) {
    for (std::int64_t k = 0;; ++k) {
      Nanos t = offset + scaled_event(*cfg.t_a, k, skew_ppm);
      if (t > horizon) break;
      tl.beacons.push_back(t);
    }
  }
  if (cfg.scans()) {
    for (std::int64_t j = 0;; ++j) {
      Nanos t = offset + scaled_event(*cfg.t_s, j, skew_ppm);
      if (t > horizon) break;
      tl.windows.emplace_back(t, t + cfg.d_s);
    }
  }
  return tl;
}

SimOutcome simulate_pair(const PiConfig& cfg_a, const PiConfig& cfg_b,
                         Nanos offset_b, const PairOptions& opts) {
  if (opts.horizon <= 0)
    fail(ErrorCode::InvalidParams, "horizon must be positive");
  Timeline ta = build_timeline(cfg_a, opts.offset_a, opts.skew_a_ppm,
                               opts.horizon);
  Timeline tb = build_timeline(cfg_b, offset_b, opts.skew_b_ppm,
                               opts.horizon);

  SimOutcome out;
  out.offset_a = opts.offset_a;
  out.offset_b = offset_b;
  Nanos both_active = std::max(opts.offset_a, offset_b);
  Nanos first_active = std::min(opts.offset_a, offset_b);

  auto ab = first_reception(ta, tb, cfg_a.d_a, opts.collisions);
  auto ba = first_reception(tb, ta, cfg_b.d_a, opts.collisions);
  if (ab) {
    out.latency_ab = *ab - both_active;
    out.latency_ab_from_start = *ab - first_active;
  }
  if (ba) {
    out.latency_ba = *ba - both_active;
    out.latency_ba_from_start = *ba - first_active;
  }
  out.collisions = count_collisions(ta.beacons, tb.beacons,
                                    std::max(cfg_a.d_a, cfg_b.d_a));
  return out;
}

namespace {

/// Minimal beacon index i with (phi + i T_a) mod T_s in [0, d_s - d_a],
/// or absent if none exists within max_steps.
std::optional<std::int64_t> first_hit(Nanos phi, Nanos t_a, Nanos t_s,
                                      Nanos usable, std::int64_t max_steps) {
  Nanos pos = phi % t_s;
  Nanos stride = t_a % t_s;
  for (std::int64_t i = 0; i <= max_steps; ++i) {
    if (pos <= usable) return i;
    pos += stride;
    if (pos >= t_s) pos -= t_s;
  }
  return std::nullopt;
}

Nanos default_sweep_horizon(const PiConfig& cfg) {
  Nanos t_a = *cfg.t_a;
  Nanos t_s = *cfg.t_s;
  Nanos usable = cfg.d_s - cfg.d_a;
  if (t_a <= usable) return 2 * worst_case_order0(cfg).d_m + t_s;
  Nanos g = t_a <= t_s ? gamma_step(t_a, t_s) : gamma_step(t_s, t_a);
  if (g > 0 && g <= usable) {
    Nanos bound = std::max(worst_case_order1_shrink(cfg).d_m,
                           worst_case_order1_grow(cfg).d_m);
    return 2 * bound + t_s;
  }
  // Order >= 2 or resonant schedule: no closed form to size from.
  return 64 * t_s + 64 * t_a;
}

}  // namespace

CdfCurve sweep_offsets(const PiConfig& cfg, Nanos step,
                       const SweepOptions& opts) {
  cfg.validate();
  if (!cfg.advertises() || !cfg.scans())
    fail(ErrorCode::InvalidConfig, "offset sweep needs both intervals finite");
  if (step < 1) fail(ErrorCode::InvalidParams, "step must be >= 1 ns");
  if (step > cfg.d_a)
    fail(ErrorCode::StepTooCoarse, "step above d_a could miss a window edge");

  const Nanos t_a = *cfg.t_a;
  const Nanos t_s = *cfg.t_s;
  const Nanos usable = cfg.d_s - cfg.d_a;
  const Nanos horizon = opts.horizon > 0 ? opts.horizon
                                         : default_sweep_horizon(cfg);
  const std::int64_t max_steps = ceil_div(horizon, t_a);

  std::vector<Nanos> samples;
  samples.reserve(static_cast<std::size_t>(t_s / step) + 8);
  for (Nanos phi = 0; phi < t_s; phi += step) samples.push_back(phi);
  if (opts.refine_breakpoints) {
    auto push = [&](Nanos phi) {
      phi %= t_s;
      if (phi < 0) phi += t_s;
      samples.push_back(phi);
      samples.push_back(phi + 1 < t_s ? phi + 1 : 0);
      samples.push_back(phi > 0 ? phi - 1 : t_s - 1);
    };
    Nanos pos = 0;  // (i * t_a) mod t_s
    Nanos stride = t_a % t_s;
    for (std::int64_t i = 0; i <= max_steps; ++i) {
      push(t_s - pos);           // beacon i enters the window
      push(t_s - pos + usable);  // beacon i leaves the usable span
      pos += stride;
      if (pos >= t_s) pos -= t_s;
    }
  }
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

  const std::size_t n = samples.size();
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::map<Nanos, __int128> weight;  // latency level -> offset measure
  constexpr std::size_t kBlock = 1u << 20;
  std::vector<std::int64_t> hits;
  for (std::size_t base = 0; base < n; base += kBlock) {
    const std::size_t cnt = std::min(kBlock, n - base);
    hits.assign(cnt, -1);
    std::vector<std::future<void>> futs;
    std::size_t chunk = (cnt + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t lo = w * chunk;
      std::size_t hi = std::min(cnt, lo + chunk);
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, [&, lo, hi] {
        for (std::size_t j = lo; j < hi; ++j) {
          auto hit = first_hit(samples[base + j], t_a, t_s, usable, max_steps);
          hits[j] = hit ? *hit : -1;
        }
      }));
    }
    for (auto& f : futs) f.get();
    for (std::size_t j = 0; j < cnt; ++j) {
      if (hits[j] < 0)
        fail(ErrorCode::OrderViolation,
             "offset sweep exceeded its horizon without a reception");
      Nanos level = hits[j] * t_a + cfg.d_a;
      std::size_t g = base + j;
      Nanos cell = (g + 1 < n ? samples[g + 1] : t_s) - samples[g];
      weight[level] += cell;
    }
  }

  CdfCurve curve;
  long double acc = 0.0L;
  long double total = static_cast<long double>(t_s);
  long double mean = 0.0L;
  for (const auto& [level, w] : weight) {
    acc += static_cast<long double>(w);
    mean += static_cast<long double>(level) * static_cast<long double>(w);
    curve.points.push_back({level, static_cast<double>(acc / total)});
  }
  curve.points.back().cum_prob = 1.0;
  curve.worst_case = curve.points.back().latency;
  curve.mean = static_cast<double>(mean / total);
  return curve;
}

std::vector<SimOutcome> monte_carlo(const PiConfig& cfg, std::int64_t trials,
                                    std::uint64_t seed,
                                    const MonteCarloOptions& opts) {
  cfg.validate();
  if (trials < 1) fail(ErrorCode::InvalidParams, "trials must be >= 1");
  if (!cfg.scans())
    fail(ErrorCode::InvalidConfig, "monte_carlo needs a scanning schedule");
  const Nanos t_s = *cfg.t_s;

  std::vector<SimOutcome> outcomes(static_cast<std::size_t>(trials));
  auto run = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      TrialRng rng(seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL);
      PairOptions pair;
      pair.offset_a = static_cast<Nanos>(rng.bounded(t_s));
      pair.collisions = opts.collisions;
      pair.skew_a_ppm = rng.symmetric(opts.skew_ppm_range);
      pair.skew_b_ppm = rng.symmetric(opts.skew_ppm_range);
      pair.horizon = opts.horizon;
      Nanos offset_b = static_cast<Nanos>(rng.bounded(t_s));
      outcomes[static_cast<std::size_t>(i)] =
          simulate_pair(cfg, cfg, offset_b, pair);
    }
  };

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> futs;
  std::int64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::int64_t lo = w * chunk;
    std::int64_t hi = std::min<std::int64_t>(trials, lo + chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, run, lo, hi));
  }
  for (auto& f : futs) f.get();
  return outcomes;
}

}  // namespace pikm
