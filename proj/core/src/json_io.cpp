#include "pikm/json_io.hpp"

namespace pikm {

namespace {

void interval_to_json(nlohmann::json& j, const char* key, const Interval& v) {
  if (v)
    j[key] = *v;
  else
    j[key] = nullptr;
}

Interval interval_from_json(const nlohmann::json& j, const char* key) {
  const auto& field = j.at(key);
  if (field.is_null()) return std::nullopt;
  return field.get<Nanos>();
}

SlottedProtocol protocol_from_name(const std::string& name) {
  for (SlottedProtocol p :
       {SlottedProtocol::DISCO, SlottedProtocol::UCONNECT,
        SlottedProtocol::SEARCHLIGHT_S, SlottedProtocol::OPT_DIFFCODES,
        SlottedProtocol::LIGHTNING, SlottedProtocol::G_NIHAO}) {
    if (to_string(p) == name) return p;
  }
  fail(ErrorCode::UnsupportedProtocol, "unknown protocol '" + name + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const PiConfig& cfg) {
  j = nlohmann::json::object();
  interval_to_json(j, "t_a_ns", cfg.t_a);
  interval_to_json(j, "t_s_ns", cfg.t_s);
  j["d_s_ns"] = cfg.d_s;
  j["d_a_ns"] = cfg.d_a;
}

void from_json(const nlohmann::json& j, PiConfig& cfg) {
  cfg.t_a = interval_from_json(j, "t_a_ns");
  cfg.t_s = interval_from_json(j, "t_s_ns");
  cfg.d_s = j.at("d_s_ns").get<Nanos>();
  cfg.d_a = j.at("d_a_ns").get<Nanos>();
}

void to_json(nlohmann::json& j, const RadioParams& radio) {
  j = nlohmann::json{{"d_a_ns", radio.d_a},
                     {"d_s_min_ns", radio.d_s_min},
                     {"tick_ns", radio.tick},
                     {"skew_ppm", radio.skew_ppm},
                     {"n_bytes", radio.n_bytes},
                     {"bitrate", radio.bitrate}};
}

void from_json(const nlohmann::json& j, RadioParams& radio) {
  RadioParams defaults;
  radio.d_a = j.value("d_a_ns", defaults.d_a);
  radio.d_s_min = j.value("d_s_min_ns", defaults.d_s_min);
  radio.tick = j.value("tick_ns", defaults.tick);
  radio.skew_ppm = j.value("skew_ppm", defaults.skew_ppm);
  radio.n_bytes = j.value("n_bytes", defaults.n_bytes);
  radio.bitrate = j.value("bitrate", defaults.bitrate);
  if (!j.contains("d_a_ns") && j.contains("n_bytes") && j.contains("bitrate"))
    radio.d_a = beacon_duration(radio.n_bytes, radio.bitrate);
  radio.validate();
}

void to_json(nlohmann::json& j, const SlottedSpec& spec) {
  j = nlohmann::json{{"protocol", to_string(spec.protocol)},
                     {"d_sl_ns", spec.d_sl},
                     {"params",
                      {{"beta", spec.beta},
                       {"delta", spec.delta},
                       {"gamma_ratio", spec.gamma_ratio}}}};
}

void from_json(const nlohmann::json& j, SlottedSpec& spec) {
  spec.protocol = protocol_from_name(j.at("protocol").get<std::string>());
  spec.d_sl = j.at("d_sl_ns").get<Nanos>();
  if (j.contains("params")) {
    const auto& p = j["params"];
    spec.beta = p.value("beta", spec.beta);
    spec.delta = p.value("delta", spec.delta);
    spec.gamma_ratio = p.value("gamma_ratio", spec.gamma_ratio);
  }
}

void to_json(nlohmann::json& j, const VariantSolution& sol) {
  j = nlohmann::json{{"variant", to_string(sol.variant)},
                     {"k", sol.k},
                     {"M", sol.M},
                     {"config", sol.config},
                     {"eps_ns", sol.eps},
                     {"eps_ta_ns", sol.eps_ta},
                     {"eta_achieved", sol.eta_achieved},
                     {"d_m_ns", sol.d_m},
                     {"clamped", sol.clamped},
                     {"warnings", sol.warnings}};
}

void to_json(nlohmann::json& j, const SimOutcome& outcome) {
  auto latency = [](const std::optional<Nanos>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j = nlohmann::json{{"latency_ab_ns", latency(outcome.latency_ab)},
                     {"latency_ba_ns", latency(outcome.latency_ba)},
                     {"latency_ab_from_start_ns",
                      latency(outcome.latency_ab_from_start)},
                     {"latency_ba_from_start_ns",
                      latency(outcome.latency_ba_from_start)},
                     {"collisions", outcome.collisions},
                     {"offset_a_ns", outcome.offset_a},
                     {"offset_b_ns", outcome.offset_b}};
}

}  // namespace pikm
