// qpe-certify: numerical verification suite for the phase-estimation
// theorem chain, plus small utilities for bound sweeps and single-instance
// simulation.
//
// Commands:
//   verify     run the check graph and emit a report (json/csv/text)
//   sweep      emit the failure-bound comparison table as CSV
//   simulate   print the outcome distribution of one instance
//
// Exit status: 0 all checks passed, 1 at least one check failed,
// 2 configuration or usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpecert/analytic.hpp"
#include "qpecert/checks.hpp"
#include "qpecert/config.hpp"
#include "qpecert/instances.hpp"
#include "qpecert/registry.hpp"
#include "qpecert/report.hpp"

namespace {

using namespace qpecert;

void write_output(const std::string& content, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output path: " + path);
  out << content;
  if (!out) throw config_error("failed writing output path: " + path);
}

struct VerifyFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> t_max;
  std::optional<std::string> include;
  std::optional<std::string> exclude;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<std::string> phase_kind;
  std::optional<std::string> s_values;
};

RunConfig resolve_config(const VerifyFlags& flags) {
  RunConfig config;
  // precedence: flag > config file > environment > default
  if (const char* env = std::getenv("QPE_CERTIFY_SEED")) {
    config.seed =
        static_cast<std::uint64_t>(detail::parse_int(env, "QPE_CERTIFY_SEED"));
  }
  if (!flags.config_path.empty()) config = parse_config_file(flags.config_path, config);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.t_max) config.t_max = *flags.t_max;
  if (flags.include) apply_config_entry(config, "include", *flags.include);
  if (flags.exclude) apply_config_entry(config, "exclude", *flags.exclude);
  if (flags.format) config.format = parse_output_format(*flags.format);
  if (flags.out) config.out_path = *flags.out;
  if (flags.workers) config.workers = *flags.workers;
  if (flags.phase_kind) config.phase_kind = parse_phase_kind(*flags.phase_kind);
  if (flags.s_values) apply_config_entry(config, "s_values", *flags.s_values);
  config.validate();
  return config;
}

int cmd_verify(const VerifyFlags& flags) {
  const RunConfig config = resolve_config(flags);
  const CheckGraph graph = build_check_graph(config);
  const CheckReport report = run_suite(graph, config);
  write_output(render_report(report, config.format), config.out_path);
  return report.all_passed() ? 0 : 1;
}

int cmd_sweep(std::int64_t e_max, const std::string& out) {
  write_output(sweep_to_csv(e_max), out);
  return 0;
}

int cmd_simulate(int t, int s, const std::string& phase_text, const std::string& kind,
                 std::uint64_t seed, const std::string& format, const std::string& out) {
  const Phase phase = parse_phase(phase_text);
  const QpeInstance inst = kind == "random" ? random_instance(t, s, phase, seed)
                                            : diagonal_instance(t, s, phase);
  const MeasurementDistribution dist = output_distribution(inst);
  const PhaseGeometry geom = PhaseGeometry::from(phase, t);
  const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;

  if (format == "csv") {
    std::string body = "m,probability\r\n";
    for (std::size_t m = 0; m < dist.probs.size(); ++m)
      body += std::to_string(m) + "," + format_double(dist.probs[m]) + "\r\n";
    write_output(body, out);
    return 0;
  }

  if (format == "json") {
    nlohmann::json j{{"t", t},
                     {"s", s},
                     {"phase", phase.str()},
                     {"phase_value", phase.value()},
                     {"kind", kind},
                     {"seed", seed},
                     {"probabilities", dist.probs},
                     {"b_f", geom.best_floor},
                     {"b_r", geom.best_round},
                     {"delta_bf", geom.delta_floor},
                     {"delta_br", geom.delta_round}};
    nlohmann::json successes = nlohmann::json::array();
    for (std::int64_t e = 1; e <= e_max; ++e)
      successes.push_back({{"e", e}, {"success_prob", success_prob(dist, phase, e)}});
    j["success"] = successes;
    write_output(j.dump(2) + "\n", out);
    return 0;
  }

  std::string body = "t=" + std::to_string(t) + " s=" + std::to_string(s) +
                     " phase=" + phase.str() + " (" + format_double(phase.value()) +
                     ") kind=" + kind + "\n\n  m  probability\n";
  for (std::size_t m = 0; m < dist.probs.size(); ++m)
    body += "  " + std::to_string(m) + "  " + format_double(dist.probs[m]) + "\n";
  body += "\nb_f=" + std::to_string(geom.best_floor) +
          " b_r=" + std::to_string(geom.best_round) +
          " delta_bf=" + format_double(geom.delta_floor) +
          " delta_br=" + format_double(geom.delta_round) + "\n";
  if (e_max >= 1) {
    body += "\n  e  success_prob\n";
    for (std::int64_t e = 1; e <= e_max; ++e)
      body += "  " + std::to_string(e) + "  " + format_double(success_prob(dist, phase, e)) + "\n";
  }
  write_output(body, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification suite for quantum phase estimation"};
  app.require_subcommand(1);

  VerifyFlags verify_flags;
  CLI::App* verify = app.add_subcommand("verify", "run the check graph and write a report");
  verify->add_option("--config", verify_flags.config_path, "config file (key = value lines)");
  verify->add_option("--seed", verify_flags.seed, "RNG seed (overrides config and env)");
  verify->add_option("--t-max", verify_flags.t_max, "largest first-register width");
  verify->add_option("--include", verify_flags.include,
                     "comma-separated checks to run (plus their prerequisites)");
  verify->add_option("--exclude", verify_flags.exclude, "comma-separated checks to drop");
  verify->add_option("--format", verify_flags.format, "report format: json, csv, or text");
  verify->add_option("--out", verify_flags.out, "output path (default: stdout)");
  verify->add_option("--workers", verify_flags.workers, "worker threads (0 = all cores)");
  verify->add_option("--phase-kind", verify_flags.phase_kind,
                     "phase grid: dyadic, nondyadic, or mixed");
  verify->add_option("--s-values", verify_flags.s_values, "comma-separated second-register sizes");

  std::int64_t e_max = 0;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "emit the failure-bound comparison CSV");
  sweep->add_option("--e-max", e_max, "largest error tolerance e")->required();
  sweep->add_option("--out", sweep_out, "output path (default: stdout)");

  int sim_t = 3, sim_s = 1;
  std::string sim_phase, sim_kind = "diagonal", sim_format = "text", sim_out;
  std::uint64_t sim_seed = 12345;
  CLI::App* simulate = app.add_subcommand("simulate", "outcome distribution of one instance");
  simulate->add_option("--t", sim_t, "first-register qubits")->required();
  simulate->add_option("--s", sim_s, "second-register qubits");
  simulate->add_option("--phase", sim_phase, "phase: a/2^q, p/q, or decimal in [0,1)")
      ->required();
  simulate->add_option("--kind", sim_kind, "instance kind: diagonal or random")
      ->check(CLI::IsMember({"diagonal", "random"}));
  simulate->add_option("--seed", sim_seed, "seed for random instances");
  simulate->add_option("--format", sim_format, "text, json, or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  simulate->add_option("--out", sim_out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(verify_flags);
    if (sweep->parsed()) return cmd_sweep(e_max, sweep_out);
    if (simulate->parsed())
      return cmd_simulate(sim_t, sim_s, sim_phase, sim_kind, sim_seed, sim_format, sim_out);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
