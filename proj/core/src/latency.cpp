#include "pikm/latency.hpp"

namespace pikm {

namespace {

struct FiniteConfig {
  Nanos t_a;
  Nanos t_s;
  Nanos d_s;
  Nanos d_a;
  Nanos usable;  // d_s - d_a, the span a beacon start may occupy
};

FiniteConfig require_finite(const PiConfig& cfg) {
  cfg.validate();
  if (!cfg.advertises() || !cfg.scans())
    fail(ErrorCode::InvalidConfig,
         "latency bounds need both intervals finite");
  return {*cfg.t_a, *cfg.t_s, cfg.d_s, cfg.d_a, cfg.d_s - cfg.d_a};
}

/// gamma of the order-1 process regardless of which interval is longer.
/// The offset is tracked per instance of the larger interval.
Nanos order1_gamma(Nanos t_a, Nanos t_s) {
  return t_a <= t_s ? gamma_step(t_a, t_s) : gamma_step(t_s, t_a);
}

void require_order1(const FiniteConfig& c) {
  if (c.t_a <= c.usable)
    fail(ErrorCode::OrderViolation,
         "T_a <= d_s - d_a is an order-0 schedule");
  Nanos g = order1_gamma(c.t_a, c.t_s);
  if (g > c.usable)
    fail(ErrorCode::OrderViolation,
         "gamma exceeds d_s - d_a, process order is >= 2");
}

}  // namespace

std::string to_string(ProcessDirection d) {
  switch (d) {
    case ProcessDirection::SHRINK: return "shrink";
    case ProcessDirection::GROW: return "grow";
    case ProcessDirection::NONE: return "none";
  }
  return "?";
}

LatencyBound worst_case_order0(const PiConfig& cfg) {
  FiniteConfig c = require_finite(cfg);
  if (c.t_a > c.usable)
    fail(ErrorCode::OrderViolation,
         "order-0 bound requires T_a <= d_s - d_a");
  Nanos d_m = ceil_div(c.t_s - c.usable, c.t_a) * c.t_a + c.d_a;
  return {d_m, 0, ProcessDirection::NONE};
}

LatencyBound worst_case_order1_shrink(const PiConfig& cfg) {
  FiniteConfig c = require_finite(cfg);
  require_order1(c);
  Nanos head = ceil_div(c.t_s - c.t_a, c.t_a) * c.t_a;
  if (head < 0) head = 0;
  Nanos periods = floor_div(c.t_s, c.t_a);
  Nanos walk = 0;
  if (periods > 0) {
    Nanos g = order1_gamma(c.t_a, c.t_s);
    if (g == 0)
      fail(ErrorCode::OrderViolation, "degenerate schedule, gamma is zero");
    walk = ceil_div(c.t_a - c.usable, g) * periods * c.t_a;
  }
  return {head + walk + c.d_a, 1, ProcessDirection::SHRINK};
}

LatencyBound worst_case_order1_grow(const PiConfig& cfg) {
  FiniteConfig c = require_finite(cfg);
  require_order1(c);
  Nanos head = ceil_div(c.t_s + c.usable - c.t_a, c.t_a) * c.t_a;
  if (head < 0) head = 0;
  Nanos g = order1_gamma(c.t_a, c.t_s);
  if (g == 0)
    fail(ErrorCode::OrderViolation, "degenerate schedule, gamma is zero");
  Nanos walk = ceil_div(c.t_a - c.usable, g) * ceil_div(c.t_s, c.t_a) * c.t_a;
  return {head + walk + c.d_a, 1, ProcessDirection::GROW};
}

ProcessDirection classify_direction(Nanos t_a, Nanos t_s) {
  if (t_a <= 0 || t_s <= 0)
    fail(ErrorCode::InvalidParams, "intervals must be positive");
  Nanos rho = t_s % t_a;
  if (rho == 0) return ProcessDirection::NONE;
  return (t_a - rho <= rho) ? ProcessDirection::SHRINK
                            : ProcessDirection::GROW;
}

Nanos pi_km_closed_form(std::int64_t k, std::int64_t M, Nanos d_s,
                        const RadioParams& radio, Nanos eps) {
  radio.validate();
  if (k < 1 || M < 1) fail(ErrorCode::InvalidParams, "k and M must be >= 1");
  if (d_s <= radio.d_a)
    fail(ErrorCode::InvalidParams, "d_s must exceed d_a");
  if (eps < 0) fail(ErrorCode::InvalidParams, "eps must be >= 0");
  Nanos usable = d_s - radio.d_a;
  if (k == 1) return (M - 1) * ((M + 1) * usable - eps) + radio.d_a;
  __int128 span = static_cast<__int128>(k) * (M + 1) * usable - eps;
  __int128 num = span * (static_cast<__int128>(k) * (M + 1) - 2);
  __int128 quot = (num + k - 1) / k;  // round the bound up, never down
  return static_cast<Nanos>(quot) + radio.d_a;
}

Nanos pi0m_closed_form(std::int64_t M, Nanos d_s, const RadioParams& radio) {
  radio.validate();
  if (M < 1) fail(ErrorCode::InvalidParams, "M must be >= 1");
  if (d_s <= radio.d_a)
    fail(ErrorCode::InvalidParams, "d_s must exceed d_a");
  return M * (d_s - radio.d_a) + radio.d_a;
}

Nanos variant_bound(Variant variant, std::int64_t k, std::int64_t M,
                    const PiConfig& cfg) {
  switch (variant) {
    case Variant::PI0M:
      return worst_case_order0(cfg).d_m;
    case Variant::PIK1P:
      return worst_case_order1_shrink(cfg).d_m;
    case Variant::PIK2P: {
      if (!cfg.advertises())
        fail(ErrorCode::InvalidConfig, "PIK2P bound needs a finite t_a");
      return (k * (M + 1) - 2) * *cfg.t_a + cfg.d_a;
    }
  }
  fail(ErrorCode::InvalidParams, "unknown variant");
}

}  // namespace pikm
