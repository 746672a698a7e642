#include <doctest.h>

#include <random>

#include "pikm/latency.hpp"
#include "pikm/optimizer.hpp"
#include "pikm/simulator.hpp"

using namespace pikm;

namespace {

/// Direct O(n^2) reception check over all beacon/window pairs, kept
/// deliberately independent of the library's binary-search path.
std::optional<Nanos> naive_first_reception(const Timeline& tx,
                                           const Timeline& rx, Nanos d_a,
                                           bool physical) {
  for (Nanos t : tx.beacons) {
    bool inside = false;
    for (const auto& [w0, w1] : rx.windows)
      if (w0 <= t && t + d_a <= w1) {
        inside = true;
        break;
      }
    if (!inside) continue;
    if (physical) {
      bool blocked = false;
      for (Nanos b : rx.beacons)
        if (b < t + d_a && t < b + d_a) {
          blocked = true;
          break;
        }
      if (blocked) continue;
    }
    return t + d_a;
  }
  return std::nullopt;
}

PiConfig symmetric(Nanos t_a, Nanos t_s, Nanos d_s, Nanos d_a) {
  return PiConfig{t_a, t_s, d_s, d_a};
}

}  // namespace

TEST_CASE("timeline is an arithmetic progression without skew") {
  auto cfg = symmetric(10 * kNanosPerMilli, 100 * kNanosPerMilli,
                       11 * kNanosPerMilli, 368'000);
  auto tl = build_timeline(cfg, 0, 0, 35 * kNanosPerMilli);
  REQUIRE(tl.beacons.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(tl.beacons[i] == i * 10 * kNanosPerMilli);
  REQUIRE(tl.windows.size() == 1);
  CHECK(tl.windows[0].first == 0);
  CHECK(tl.windows[0].second == 11 * kNanosPerMilli);
}

TEST_CASE("skew accumulates multiplicatively, not per step") {
  PiConfig cfg{10 * kNanosPerMilli, std::nullopt, 0, 368'000};
  Nanos horizon = 1'000'030 * kNanosPerMilli;
  auto tl = build_timeline(cfg, 0, 20, horizon);
  REQUIRE(tl.beacons.size() > 100'000);
  // beacon k sits at k * 10ms * 1.00002 exactly; at k = 1e5 the drift is
  // 20us * 1e5 / 1e3 = 20 ms on the nose
  CHECK(tl.beacons[100'000] ==
        100'000LL * 10 * kNanosPerMilli + 20 * kNanosPerMilli);
}

TEST_CASE("switched-off roles produce empty event streams") {
  PiConfig advertiser{10 * kNanosPerMilli, std::nullopt, 0, 368'000};
  auto tl = build_timeline(advertiser, 0, 0, kNanosPerSecond);
  CHECK(tl.windows.empty());
  CHECK(!tl.beacons.empty());

  PiConfig scanner{std::nullopt, 100 * kNanosPerMilli, 11 * kNanosPerMilli,
                   368'000};
  auto ts = build_timeline(scanner, 0, 0, kNanosPerSecond);
  CHECK(ts.beacons.empty());
  CHECK(!ts.windows.empty());
}

TEST_CASE("timeline rejects bad offsets and extreme skew") {
  auto cfg = symmetric(10 * kNanosPerMilli, 100 * kNanosPerMilli,
                       11 * kNanosPerMilli, 368'000);
  CHECK_THROWS_AS(build_timeline(cfg, -1, 0, kNanosPerSecond), Error);
  CHECK_THROWS_AS(build_timeline(cfg, 100 * kNanosPerMilli, 0,
                                 kNanosPerSecond),
                  Error);
  CHECK_THROWS_AS(build_timeline(cfg, 0, 501, kNanosPerSecond), Error);
  CHECK_THROWS_AS(build_timeline(cfg, 0, 0, 0), Error);
}

TEST_CASE("reception agrees with the direct pairwise checker") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 150; ++i) {
    Nanos d_a = 50'000 + static_cast<Nanos>(rng() % 400'000);
    Nanos d_s = d_a + 200'000 + static_cast<Nanos>(rng() % 8'000'000);
    Nanos t_s = d_s + static_cast<Nanos>(rng() % 60'000'000);
    Nanos t_a = d_a + 1 + static_cast<Nanos>(rng() % 30'000'000);
    auto cfg = symmetric(t_a, t_s, d_s, d_a);
    Nanos offset_b = static_cast<Nanos>(rng() % t_s);
    bool physical = rng() % 2 == 0;

    PairOptions opts;
    opts.collisions = physical;
    opts.horizon = 8 * t_s + 8 * t_a;
    auto out = simulate_pair(cfg, cfg, offset_b, opts);

    auto ta = build_timeline(cfg, 0, 0, opts.horizon);
    auto tb = build_timeline(cfg, offset_b, 0, opts.horizon);
    auto expect_ab = naive_first_reception(ta, tb, d_a, physical);
    auto expect_ba = naive_first_reception(tb, ta, d_a, physical);
    Nanos both = offset_b;
    if (expect_ab)
      CHECK(out.latency_ab == *expect_ab - both);
    else
      CHECK(!out.latency_ab.has_value());
    if (expect_ba)
      CHECK(out.latency_ba == *expect_ba - both);
    else
      CHECK(!out.latency_ba.has_value());
  }
}

TEST_CASE("perfectly aligned transmitters destroy each other's beacons") {
  OptimizerRequest req;
  req.eta_target = 0.05;
  auto sol = derive_best(req);
  PairOptions opts;
  opts.collisions = true;
  opts.horizon = 2 * sol.d_m + *sol.config.t_s;
  auto out = simulate_pair(sol.config, sol.config, 0, opts);
  CHECK(out.collisions > 0);
  // with identical periods and zero skew every beacon pair stays aligned,
  // so no discovery can ever complete in either direction
  CHECK(!out.latency_ab.has_value());
  CHECK(!out.latency_ba.has_value());
  // the idealized channel sees the aligned beacon immediately
  opts.collisions = false;
  auto ideal = simulate_pair(sol.config, sol.config, 0, opts);
  REQUIRE(ideal.latency_ab.has_value());
  CHECK(*ideal.latency_ab == sol.config.d_a);
}

TEST_CASE("a slight skew eventually breaks the deadlock") {
  OptimizerRequest req;
  req.eta_target = 0.05;
  auto sol = derive_best(req);
  PairOptions opts;
  opts.collisions = true;
  opts.skew_b_ppm = 20;
  opts.horizon = 30 * kNanosPerSecond;
  auto out = simulate_pair(sol.config, sol.config, 0, opts);
  CHECK(out.collisions > 0);
  CHECK(out.latency_ab.has_value());
}

TEST_CASE("an early window overlap discovers within one interval") {
  OptimizerRequest req;
  req.eta_target = 0.01;
  auto sol = derive_pi0m(req);
  PairOptions opts;
  opts.collisions = false;
  opts.horizon = 2 * sol.d_m;
  Nanos offset_b = *sol.config.t_s - sol.config.d_s / 2;
  auto out = simulate_pair(sol.config, sol.config, offset_b, opts);
  REQUIRE(out.latency_ab.has_value());
  CHECK(*out.latency_ab < *sol.config.t_a + sol.config.d_a);
}

TEST_CASE("shifting both offsets leaves latencies unchanged") {
  auto cfg = symmetric(7'300'000, 41'000'000, 9'000'000, 368'000);
  PairOptions base;
  base.collisions = true;
  base.horizon = kNanosPerSecond;
  std::mt19937_64 rng(33);
  for (int i = 0; i < 50; ++i) {
    Nanos phi = static_cast<Nanos>(rng() % 20'000'000);
    Nanos delta = static_cast<Nanos>(rng() % 15'000'000);
    PairOptions shifted = base;
    auto out = simulate_pair(cfg, cfg, phi, base);
    shifted.offset_a = delta;
    auto out2 = simulate_pair(cfg, cfg, phi + delta, shifted);
    CHECK(out.latency_ab == out2.latency_ab);
    CHECK(out.latency_ba == out2.latency_ba);
  }
}

TEST_CASE("sweep matches pairwise simulation point by point") {
  OptimizerRequest req;
  req.eta_target = 0.08;
  auto sol = derive_best(req);
  auto curve = sweep_offsets(sol.config, sol.config.d_a, {});
  PairOptions opts;
  opts.collisions = false;
  opts.horizon = 3 * sol.d_m + *sol.config.t_s;
  std::mt19937_64 rng(34);
  for (int i = 0; i < 25; ++i) {
    Nanos phi = static_cast<Nanos>(rng() % *sol.config.t_s);
    opts.offset_a = phi;  // advertiser joins at phi, scanner at zero
    auto out = simulate_pair(sol.config, sol.config, 0, opts);
    REQUIRE(out.latency_ab.has_value());
    CHECK(*out.latency_ab <= curve.worst_case);
  }
}

TEST_CASE("sweep produces a proper distribution") {
  OptimizerRequest req;
  req.eta_target = 0.05;
  auto sol = derive_best(req);
  auto curve = sweep_offsets(sol.config, sol.config.d_a, {});
  REQUIRE(!curve.points.empty());
  CHECK(curve.points.back().cum_prob == 1.0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].latency > curve.points[i - 1].latency);
    CHECK(curve.points[i].cum_prob >= curve.points[i - 1].cum_prob);
  }
  CHECK(curve.worst_case == curve.points.back().latency);
  CHECK(curve.mean > 0);
  CHECK(curve.mean < double(curve.worst_case));
}

TEST_CASE("sweep rejects a step coarser than the beacon") {
  auto cfg = symmetric(7'300'000, 41'000'000, 9'000'000, 368'000);
  CHECK_THROWS_AS(sweep_offsets(cfg, 368'001, {}), Error);
  CHECK_THROWS_AS(sweep_offsets(cfg, 0, {}), Error);
}

TEST_CASE("grid refinement cannot lower and barely moves the maximum") {
  OptimizerRequest req;
  req.eta_target = 0.15;
  auto sol = derive_best(req);
  SweepOptions coarse_opts;
  coarse_opts.refine_breakpoints = false;
  auto coarse = sweep_offsets(sol.config, 100'000, coarse_opts);
  auto fine = sweep_offsets(sol.config, 10'000, coarse_opts);
  CHECK(fine.worst_case >= coarse.worst_case);
  CHECK(fine.worst_case - coarse.worst_case <= 100'000 + sol.config.d_a);
  // with breakpoints the sweep is exact regardless of the grid
  auto exact1 = sweep_offsets(sol.config, sol.config.d_a, {});
  auto exact2 = sweep_offsets(sol.config, 100'000, {});
  CHECK(exact1.worst_case == exact2.worst_case);
}

TEST_CASE("monte carlo is reproducible across runs and thread counts") {
  OptimizerRequest req;
  req.eta_target = 0.1;
  auto sol = derive_best(req);
  MonteCarloOptions mc;
  mc.collisions = true;
  mc.skew_ppm_range = 20;
  mc.horizon = 2 * kNanosPerSecond;
  auto a = monte_carlo(sol.config, 500, 7, mc);
  auto b = monte_carlo(sol.config, 500, 7, mc);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].offset_a == b[i].offset_a);
    CHECK(a[i].offset_b == b[i].offset_b);
    CHECK(a[i].latency_ab == b[i].latency_ab);
    CHECK(a[i].latency_ba == b[i].latency_ba);
    CHECK(a[i].collisions == b[i].collisions);
  }
  auto c = monte_carlo(sol.config, 500, 8, mc);
  bool any_differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].offset_b != c[i].offset_b) any_differs = true;
  CHECK(any_differs);
}

TEST_CASE("idealized monte carlo never exceeds the closed-form bound") {
  OptimizerRequest req;
  req.eta_target = 0.05;
  auto sol = derive_best(req);
  MonteCarloOptions mc;
  mc.collisions = false;
  mc.skew_ppm_range = 0;
  mc.horizon = 2 * sol.d_m + *sol.config.t_s;
  auto outcomes = monte_carlo(sol.config, 2000, 99, mc);
  for (const auto& out : outcomes) {
    REQUIRE(out.latency_ab.has_value());
    REQUIRE(out.latency_ba.has_value());
    CHECK(*out.latency_ab <= sol.d_m);
    CHECK(*out.latency_ba <= sol.d_m);
  }
}

TEST_CASE("collision-affected fraction tracks twice the utilization") {
  OptimizerRequest req;
  req.eta_target = 0.09;
  auto sol = derive_best(req);
  MonteCarloOptions mc;
  mc.collisions = true;
  mc.skew_ppm_range = 20;
  mc.horizon = 10 * kNanosPerSecond;
  auto with = monte_carlo(sol.config, 2000, 7, mc);
  mc.collisions = false;
  auto without = monte_carlo(sol.config, 2000, 7, mc);
  int affected = 0;
  for (std::size_t i = 0; i < with.size(); ++i)
    if (with[i].latency_ab != without[i].latency_ab) ++affected;
  double fraction = double(affected) / double(with.size());
  double expectation = 2.0 * double(sol.config.d_a) / double(*sol.config.t_a);
  CHECK(fraction > 0.5 * expectation);
  CHECK(fraction < 1.8 * expectation);
}
