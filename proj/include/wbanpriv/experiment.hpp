#pragma once

// Experiment runner behind the command-line tool and the Python module.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wbanpriv/adversary.hpp"
#include "wbanpriv/energy.hpp"
#include "wbanpriv/simnet.hpp"

namespace wbanpriv::experiment {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kSeedEnvVar = "WBANPRIV_SEED";

enum class Command { run_game, simulate, energy_report };
enum class OutputFormat { json, csv };

std::string_view to_string(Command c);
std::string_view to_string(OutputFormat f);
std::optional<Command> parse_command(std::string_view name);
std::optional<OutputFormat> parse_format(std::string_view name);

struct ExperimentSpec {
  Command command = Command::run_game;
  adversary::ProtocolKind protocol = adversary::ProtocolKind::proposed;
  int game = 1;
  std::size_t trials = 1000;
  std::size_t nodes = 5;
  std::uint64_t seed = 1;
  /// Unset means GameConfig::default_budget(nodes).
  std::optional<adversary::OracleBudget> budget;
  double loss_rate = 0.0;
  OutputFormat format = OutputFormat::json;
  unsigned k_bits = crypto::kDefaultKBits;
  unsigned jobs = 1;

  /// Throws ConfigError whose message starts with the offending field.
  void validate() const;
  adversary::OracleBudget effective_budget() const;
  adversary::GameConfig game_config() const;
};

struct StrategyRun {
  std::string strategy;
  std::vector<adversary::GameResult> results;
  adversary::AdvantageEstimate advantage;
};

/// The matching linking strategy first, then the random control.
std::vector<StrategyRun> run_games(const ExperimentSpec& spec);

struct RoundRecord {
  std::size_t round = 0;
  std::size_t node = 0;
  simnet::RoundOutcome outcome;
};

struct SimulationSummary {
  std::size_t rounds = 0;
  std::size_t completed = 0;
  std::size_t frames_sent = 0;
  std::size_t frames_lost = 0;
  /// Announces accepted through the previous sink pseudonym.
  std::size_t desync_recoveries = 0;
  /// Announces sent to broadcast by a node that already had a peer.
  std::size_t broadcast_fallbacks = 0;
  /// Frames that arrived intact but were rejected: the pair could not
  /// recover from an earlier loss.
  std::size_t permanent_desyncs = 0;
  /// Completed rounds after which node and sink disagreed.
  std::size_t sync_violations = 0;
  std::size_t pseudonyms_emitted = 0;
  std::size_t duplicate_pseudonyms = 0;
  /// Nodes not synchronized when the run ends (last exchange lost).
  std::size_t unsynchronized_at_end = 0;
  std::vector<RoundRecord> records;
  energy::EnergyReport energy_per_round;
};

SimulationSummary simulate(const ExperimentSpec& spec);

nlohmann::json energy_to_json(const energy::EnergyReport& report);
nlohmann::json spec_echo(const ExperimentSpec& spec);

/// Full report as JSON ({schema_version, spec_echo, results, ...}).
nlohmann::json run_json(const ExperimentSpec& spec);

/// Report rendered in spec.format. JSON is pretty-printed with a trailing
/// newline; CSV has one row per trial (games) or round (simulate).
std::string render(const ExperimentSpec& spec);

}  // namespace wbanpriv::experiment
