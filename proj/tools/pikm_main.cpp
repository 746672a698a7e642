// Command line front end for slotless neighbor-discovery analysis:
// parameter derivation, baseline comparison tables, latency CDFs,
// Monte-Carlo simulation and duty-cycle granularity studies. All file
// outputs are plain CSV/JSONL for plotting.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pikm/baselines.hpp"
#include "pikm/json_io.hpp"
#include "pikm/latency.hpp"
#include "pikm/model.hpp"
#include "pikm/optimizer.hpp"
#include "pikm/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

int exit_code_for(const pikm::Error& e) {
  switch (e.code()) {
    case pikm::ErrorCode::InfeasibleEta:
    case pikm::ErrorCode::RangesEmpty:
    case pikm::ErrorCode::EtaOutOfRange:
    case pikm::ErrorCode::GuardExceedsWindow:
    case pikm::ErrorCode::SlotTooShort:
      return kExitInfeasible;
    default:
      return kExitUsage;
  }
}

pikm::RadioParams load_radio(const std::string& path) {
  if (path.empty()) return pikm::RadioParams{};
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open radio file: " + path);
  nlohmann::json j;
  in >> j;
  return j.get<pikm::RadioParams>();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open output file: " + path);
  return out;
}

pikm::VariantSolution derive(const std::string& variant,
                             const pikm::OptimizerRequest& req) {
  if (variant == "pi0m") return pikm::derive_pi0m(req);
  if (variant == "pik1") return pikm::derive_pik1(req);
  if (variant == "pik2") return pikm::derive_pik2(req);
  return pikm::derive_best(req);
}

std::string interval_str(const pikm::Interval& v) {
  return v ? pikm::format_duration(*v) : "infinite";
}

void print_solution(const pikm::VariantSolution& sol, double eta_target,
                    bool as_json) {
  auto [advertiser, scanner] = pikm::one_way_split(sol);
  if (as_json) {
    nlohmann::json j = sol;
    j["eta_target"] = eta_target;
    j["one_way"] = {{"advertiser", advertiser}, {"scanner", scanner}};
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::printf("variant        %s (k=%lld, M=%lld)\n",
              pikm::to_string(sol.variant).c_str(),
              static_cast<long long>(sol.k), static_cast<long long>(sol.M));
  std::printf("t_a            %s (%lld ns)\n",
              interval_str(sol.config.t_a).c_str(),
              static_cast<long long>(sol.config.t_a.value_or(0)));
  std::printf("t_s            %s (%lld ns)\n",
              interval_str(sol.config.t_s).c_str(),
              static_cast<long long>(sol.config.t_s.value_or(0)));
  std::printf("d_s            %s\n",
              pikm::format_duration(sol.config.d_s).c_str());
  std::printf("d_a            %s\n",
              pikm::format_duration(sol.config.d_a).c_str());
  std::printf("eps            %s  eps_ta %s\n",
              pikm::format_duration(sol.eps).c_str(),
              pikm::format_duration(sol.eps_ta).c_str());
  std::printf("eta target     %.6f\n", eta_target);
  std::printf("eta achieved   %.6f\n", sol.eta_achieved);
  std::printf("worst case     %s (%lld ns)\n",
              pikm::format_duration(sol.d_m).c_str(),
              static_cast<long long>(sol.d_m));
  for (const auto& c : sol.clamped)
    std::printf("clamped        %s\n", c.c_str());
  for (const auto& w : sol.warnings)
    std::printf("warning        %s\n", w.c_str());
  std::printf("one-way        advertiser t_a=%s, scanner t_s=%s d_s=%s\n",
              interval_str(advertiser.t_a).c_str(),
              interval_str(scanner.t_s).c_str(),
              pikm::format_duration(scanner.d_s).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slotless neighbor-discovery parameter and latency toolkit"};
  app.require_subcommand(1);

  std::string radio_file;
  app.add_option("--radio-file", radio_file,
                 "JSON radio profile overriding the built-in defaults")
      ->configurable(false);

  // optimize
  auto* opt = app.add_subcommand(
      "optimize", "derive latency-optimal schedule parameters");
  double opt_eta = 0.01;
  std::string opt_variant = "best";
  std::string opt_eps = "30518ns";
  std::int64_t opt_guard_ppm = -1;
  bool opt_json = false;
  opt->add_option("--eta", opt_eta, "target duty-cycle in (0,1)")->required();
  opt->add_option("--variant", opt_variant)
      ->check(CLI::IsMember({"best", "pi0m", "pik1", "pik2"}));
  opt->add_option("--eps", opt_eps, "ceiling guard decrement (duration)");
  opt->add_option("--skew-guard", opt_guard_ppm,
                  "apply skew guards for this clock tolerance in ppm");
  opt->add_flag("--json", opt_json, "machine-readable output");

  // compare
  auto* cmp = app.add_subcommand(
      "compare", "gain table of the best variant over slotted baselines");
  double cmp_min = 0.01, cmp_max = 0.20, cmp_step = 0.001;
  std::string cmp_dsl = "10ms", cmp_out;
  bool cmp_lenient = false, cmp_literal = false;
  cmp->add_option("--eta-min", cmp_min);
  cmp->add_option("--eta-max", cmp_max);
  cmp->add_option("--step", cmp_step);
  cmp->add_option("--dsl", cmp_dsl, "baseline slot length (duration)");
  cmp->add_option("--out", cmp_out, "CSV output file (default stdout)");
  cmp->add_flag("--lenient", cmp_lenient,
                "skip infeasible grid points with a warning");
  cmp->add_flag("--searchlight-literal", cmp_literal,
                "use the tabulated searchlight entry instead of the "
                "period-squared form");

  // cdf
  auto* cdf = app.add_subcommand(
      "cdf", "latency distribution over the initial offset");
  double cdf_eta = 0.01;
  std::string cdf_variant = "best", cdf_step = "1us", cdf_out;
  cdf->add_option("--eta", cdf_eta)->required();
  cdf->add_option("--variant", cdf_variant)
      ->check(CLI::IsMember({"best", "pi0m", "pik1", "pik2"}));
  cdf->add_option("--step", cdf_step, "offset grid step (duration)");
  cdf->add_option("--out", cdf_out, "CSV output file (default stdout)");

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "random-offset encounters with collisions and skew");
  double sim_eta = 0.01;
  std::string sim_variant = "best", sim_horizon = "30s", sim_out;
  std::int64_t sim_trials = 1000, sim_skew = 20;
  std::uint64_t sim_seed = 1;
  bool sim_collisions = false;
  sim->add_option("--eta", sim_eta)->required();
  sim->add_option("--variant", sim_variant)
      ->check(CLI::IsMember({"best", "pi0m", "pik1", "pik2"}));
  sim->add_option("--trials", sim_trials);
  sim->add_option("--seed", sim_seed);
  sim->add_flag("--collisions", sim_collisions,
                "physical channel: overlapping transmissions destroy both");
  sim->add_option("--skew-range", sim_skew,
                  "per-device skew drawn uniformly from +-ppm");
  sim->add_option("--horizon", sim_horizon, "per-trial timeout (duration)");
  sim->add_option("--out", sim_out, "JSONL output file (default stdout)");

  // granularity
  auto* gran = app.add_subcommand(
      "granularity", "realizable duty-cycles: PI family vs G-Nihao");
  double gran_min = 0.001, gran_max = 0.2, gran_step = 0.0005;
  std::string gran_dsl = "10ms", gran_out;
  gran->add_option("--min", gran_min);
  gran->add_option("--max", gran_max);
  gran->add_option("--step", gran_step);
  gran->add_option("--dsl", gran_dsl);
  gran->add_option("--out", gran_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    pikm::RadioParams radio = load_radio(radio_file);

    if (*opt) {
      pikm::OptimizerRequest req;
      req.eta_target = opt_eta;
      req.radio = radio;
      req.eps = pikm::parse_duration(opt_eps);
      pikm::VariantSolution sol = derive(opt_variant, req);
      if (opt_guard_ppm >= 0) {
        pikm::RadioParams guard_radio = radio;
        guard_radio.skew_ppm = opt_guard_ppm;
        sol = pikm::apply_skew_guards(sol, guard_radio);
      }
      print_solution(sol, opt_eta, opt_json);
      return kExitOk;
    }

    if (*cmp) {
      pikm::Nanos d_sl = pikm::parse_duration(cmp_dsl);
      std::vector<double> grid;
      for (double eta = cmp_min; eta <= cmp_max + 1e-12; eta += cmp_step) {
        if (cmp_lenient) {
          try {
            pikm::OptimizerRequest probe;
            probe.eta_target = eta;
            probe.radio = radio;
            pikm::derive_best(probe);
          } catch (const pikm::Error& e) {
            std::cerr << "warning: skipping eta=" << eta << ": " << e.what()
                      << "\n";
            continue;
          }
        }
        grid.push_back(eta);
        if (cmp_step <= 0) break;
      }
      auto table = pikm::gain_table(grid, radio, d_sl);
      if (cmp_literal) {
        // recompute the searchlight column with the literal entry
        pikm::SlottedSpec literal;
        literal.protocol = pikm::SlottedProtocol::SEARCHLIGHT_S;
        literal.d_sl = d_sl;
        literal.searchlight_literal_entry = true;
        for (auto& summary : table) {
          if (summary.protocol != pikm::SlottedProtocol::SEARCHLIGHT_S)
            continue;
          double sum = 0, sum_g = 0;
          summary.max_gain = 0;
          summary.max_gain_guarded = 0;
          for (std::size_t i = 0; i < summary.rows.size(); ++i) {
            auto& row = summary.rows[i];
            auto& guarded = summary.rows_guarded[i];
            row.d_m_slotted = guarded.d_m_slotted =
                pikm::slotted_latency(literal, row.eta, radio);
            row.gain = double(row.d_m_slotted) / double(row.d_m_pikm);
            guarded.gain =
                double(guarded.d_m_slotted) / double(guarded.d_m_pikm);
            sum += row.gain;
            sum_g += guarded.gain;
            summary.max_gain = std::max(summary.max_gain, row.gain);
            summary.max_gain_guarded =
                std::max(summary.max_gain_guarded, guarded.gain);
          }
          summary.mean_gain = sum / double(summary.rows.size());
          summary.mean_gain_guarded = sum_g / double(summary.rows.size());
        }
      }
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!cmp_out.empty()) {
        file = open_output(cmp_out);
        out = &file;
      }
      *out << "eta,protocol,d_m_slotted_ns,d_m_pikm_ns,gain\n";
      char line[256];
      for (const auto& summary : table)
        for (const auto& row : summary.rows) {
          std::snprintf(line, sizeof(line), "%.6f,%s,%lld,%lld,%.6f\n",
                        row.eta, pikm::to_string(summary.protocol).c_str(),
                        static_cast<long long>(row.d_m_slotted),
                        static_cast<long long>(row.d_m_pikm), row.gain);
          *out << line;
        }
      for (const auto& summary : table) {
        std::snprintf(line, sizeof(line),
                      "# summary,%s,mean=%.4f,max=%.4f,mean_guarded=%.4f,"
                      "max_guarded=%.4f\n",
                      pikm::to_string(summary.protocol).c_str(),
                      summary.mean_gain, summary.max_gain,
                      summary.mean_gain_guarded, summary.max_gain_guarded);
        *out << line;
      }
      return kExitOk;
    }

    if (*cdf) {
      pikm::OptimizerRequest req;
      req.eta_target = cdf_eta;
      req.radio = radio;
      pikm::VariantSolution sol = derive(cdf_variant, req);
      pikm::Nanos step =
          std::min(pikm::parse_duration(cdf_step), sol.config.d_a);
      auto curve = pikm::sweep_offsets(sol.config, step, {});
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!cdf_out.empty()) {
        file = open_output(cdf_out);
        out = &file;
      }
      *out << "latency_ns,cum_prob\n";
      char line[128];
      for (const auto& pt : curve.points) {
        std::snprintf(line, sizeof(line), "%lld,%.9f\n",
                      static_cast<long long>(pt.latency), pt.cum_prob);
        *out << line;
      }
      std::snprintf(line, sizeof(line),
                    "# worst_case_ns=%lld mean_ns=%.0f bound_ns=%lld\n",
                    static_cast<long long>(curve.worst_case), curve.mean,
                    static_cast<long long>(sol.d_m));
      *out << line;
      return kExitOk;
    }

    if (*sim) {
      pikm::OptimizerRequest req;
      req.eta_target = sim_eta;
      req.radio = radio;
      pikm::VariantSolution sol = derive(sim_variant, req);
      pikm::MonteCarloOptions mc;
      mc.collisions = sim_collisions;
      mc.skew_ppm_range = sim_skew;
      mc.horizon = pikm::parse_duration(sim_horizon);
      auto outcomes = pikm::monte_carlo(sol.config, sim_trials, sim_seed, mc);
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!sim_out.empty()) {
        file = open_output(sim_out);
        out = &file;
      }
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        nlohmann::json j = outcomes[i];
        j["trial"] = i;
        *out << j.dump() << "\n";
      }
      return kExitOk;
    }

    if (*gran) {
      auto study = pikm::granularity_study(gran_min, gran_max, gran_step,
                                           radio,
                                           pikm::parse_duration(gran_dsl));
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!gran_out.empty()) {
        file = open_output(gran_out);
        out = &file;
      }
      *out << "kind,target_eta,achieved_eta\n";
      char line[128];
      for (const auto& t : study.pi) {
        std::snprintf(line, sizeof(line), "pi,%.6f,%.9f\n", t.target,
                      t.achieved);
        *out << line;
      }
      for (double realized : study.g_nihao) {
        std::snprintf(line, sizeof(line), "g-nihao,,%.9f\n", realized);
        *out << line;
      }
      return kExitOk;
    }
  } catch (const pikm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
