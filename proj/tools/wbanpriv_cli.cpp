// wbanpriv: attack-game experiments, honest-round simulation and energy
// reports. Reports go to stdout, diagnostics to stderr.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wbanpriv/experiment.hpp"

namespace {

using wbanpriv::experiment::Command;
using wbanpriv::experiment::ExperimentSpec;

struct Flags {
  std::string protocol = "proposed";
  int game = 1;
  std::size_t trials = 1000;
  std::size_t nodes = 5;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> q_s;
  std::optional<std::uint32_t> q_r;
  std::optional<std::uint32_t> q_e;
  double loss_rate = 0.0;
  std::string format = "json";
  unsigned k_bits = 128;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--trials", f.trials, "Game trials or simulated rounds");
  cmd->add_option("--nodes", f.nodes, "Nodes in the WBAN");
  cmd->add_option("--seed", f.seed,
                  std::string("Experiment seed (default: $") +
                      wbanpriv::experiment::kSeedEnvVar + " or 1)");
  cmd->add_option("--k-bits", f.k_bits, "Security parameter in bits (32..128)");
  cmd->add_option("--format", f.format, "json or csv");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(wbanpriv::experiment::kSeedEnvVar)) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw wbanpriv::ConfigError(std::string("seed: ") +
                                wbanpriv::experiment::kSeedEnvVar +
                                " is not an unsigned integer");
  }
  return 1;
}

ExperimentSpec to_spec(Command command, const Flags& f) {
  ExperimentSpec spec;
  spec.command = command;
  const auto protocol = wbanpriv::adversary::parse_protocol(f.protocol);
  if (!protocol) {
    throw wbanpriv::ConfigError(
        "protocol: expected proposed, baseline-flawed or baseline-fixed, got '" +
        f.protocol + "'");
  }
  spec.protocol = *protocol;
  const auto format = wbanpriv::experiment::parse_format(f.format);
  if (!format) {
    throw wbanpriv::ConfigError("format: expected json or csv, got '" + f.format + "'");
  }
  spec.format = *format;
  spec.game = f.game;
  spec.trials = f.trials;
  spec.nodes = f.nodes;
  spec.seed = resolve_seed(f.seed);
  spec.loss_rate = f.loss_rate;
  spec.k_bits = f.k_bits;
  spec.jobs = f.jobs;
  if (f.q_s || f.q_r || f.q_e) {
    const auto d = wbanpriv::adversary::GameConfig::default_budget(f.nodes);
    spec.budget = wbanpriv::adversary::OracleBudget{
        f.q_s.value_or(d.q_s), f.q_r.value_or(d.q_r), f.q_e.value_or(d.q_e)};
  }
  spec.validate();
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Location-privacy protocol experiments for star-topology WBANs"};
  app.require_subcommand(1);

  Flags flags;

  auto* game = app.add_subcommand("run-game", "Run an attack game against a protocol");
  add_common(game, flags);
  game->add_option("--game", flags.game, "Attack game: 1 (sink vs node) or 2 (membership)");
  game->add_option("--protocol", flags.protocol,
                   "proposed, baseline-flawed or baseline-fixed");
  game->add_option("--qs", flags.q_s, "Query Sink budget");
  game->add_option("--qr", flags.q_r, "Query Node budget");
  game->add_option("--qe", flags.q_e, "Execute budget");
  game->add_option("--jobs", flags.jobs, "Worker threads for independent trials");

  auto* sim = app.add_subcommand("simulate", "Run honest protocol rounds over a lossy channel");
  add_common(sim, flags);
  sim->add_option("--loss-rate", flags.loss_rate, "Frame loss probability in [0, 1]");

  auto* energy = app.add_subcommand("energy-report", "Per-round energy under both conventions");
  energy->add_option("--format", flags.format, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  Command command = Command::run_game;
  if (sim->parsed()) command = Command::simulate;
  if (energy->parsed()) command = Command::energy_report;

  try {
    const ExperimentSpec spec = to_spec(command, flags);
    std::cout << wbanpriv::experiment::render(spec);
    std::cout.flush();
    return std::cout ? 0 : 1;
  } catch (const wbanpriv::ConfigError& e) {
    std::cerr << "wbanpriv: invalid " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "wbanpriv: error: " << e.what() << '\n';
    return 1;
  }
}
