#include "qcqkd/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

namespace qcqkd::cli {

namespace {

void add_options(CLI::App& app, RunConfig& cfg, bool& optimal_t) {
  app.add_option("--scheme", cfg.scheme, "bsqc | ssqc | subtraction | original")
      ->check(CLI::IsMember({"bsqc", "ssqc", "subtraction", "original"}));
  app.add_option("--m", cfg.m, "photons catalyzed in mode A");
  app.add_option("--n", cfg.n, "photons catalyzed in mode B");
  auto* alpha = app.add_option("--alpha", cfg.alpha, "squeezing parameter alpha");
  auto* variance = app.add_option("--variance", cfg.variance, "TMSV variance V");
  alpha->excludes(variance);
  variance->excludes(alpha);
  app.add_option("--beta", cfg.beta, "reconciliation efficiency")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "excess noise")->capture_default_str();
  app.add_option("--atten-db-km", cfg.atten_db_km, "fibre loss in dB/km")
      ->capture_default_str();
  auto* t = app.add_option("--t", cfg.t, "'optimal' or comma-separated transmittances");
  app.add_flag("--optimal-t", optimal_t, "same as --t optimal")->excludes(t);
  app.add_option("--d-min", cfg.d_min, "first distance in km")->capture_default_str();
  app.add_option("--d-max", cfg.d_max, "last distance in km")->capture_default_str();
  app.add_option("--d-step", cfg.d_step, "distance step in km")->capture_default_str();
  app.add_option("--alpha-min", cfg.alpha_min)->capture_default_str();
  app.add_option("--alpha-max", cfg.alpha_max)->capture_default_str();
  app.add_option("--alpha-step", cfg.alpha_step)->capture_default_str();
  app.add_option("--floor", cfg.floor, "key-rate floor for max-distance")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for verify sampling")->capture_default_str();
  app.add_option("--samples", cfg.samples, "random verify points")->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff, "fixed Fock cutoff for verify");
  app.add_flag("--flip-bs-sign", cfg.flip_bs_sign,
               "use the opposite beamsplitter reflection sign in verify");
  app.add_option("--tolerance", cfg.tolerance, "verify pass threshold")
      ->capture_default_str();
}

void emit(const Table& table, const RunConfig& cfg, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (cfg.format == "json") {
      write_json(table, os);
    } else {
      write_csv(table, os);
    }
  };
  if (cfg.out.empty()) {
    write(out);
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) throw UsageError(fmt::format("cannot open '{}' for writing", cfg.out));
  write(file);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Continuous-variable QKD with quantum catalysis"};
  app.name("qcqkd");
  app.set_config("--config", "", "read options from a key=value file");
  app.require_subcommand(1);
  app.footer(
      "With --t optimal the transmittance is re-optimized at every distance and\n"
      "every excess-noise trial. Config files hold flat key=value lines; flags on\n"
      "the command line override them.");
  bool optimal_t = false;
  add_options(app, cfg, optimal_t);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"success-prob", "success probability versus alpha"},
      {"entanglement", "logarithmic negativity versus alpha"},
      {"keyrate", "secret key rate versus distance"},
      {"excess-noise", "largest tolerable excess noise versus distance"},
      {"max-distance", "largest distance above the key-rate floor"},
      {"verify", "compare analytic formulas against the Fock-space oracle"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (optimal_t) cfg.t = "optimal";

  try {
    if (cfg.command == "verify") {
      const auto report = cmd_verify(cfg);
      emit(report.table, cfg, out);
      if (!report.passed) {
        err << "verify: oracle deviation above tolerance\n";
        return kExitVerifyFailed;
      }
      return kExitOk;
    }
    Table table;
    if (cfg.command == "success-prob") {
      table = cmd_success_prob(cfg);
    } else if (cfg.command == "entanglement") {
      table = cmd_entanglement(cfg);
    } else if (cfg.command == "keyrate") {
      table = cmd_keyrate(cfg);
    } else if (cfg.command == "excess-noise") {
      table = cmd_excess_noise(cfg);
    } else {
      table = cmd_max_distance(cfg);
    }
    emit(table, cfg, out);
    return kExitOk;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace qcqkd::cli
