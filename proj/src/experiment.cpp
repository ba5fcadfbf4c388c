#include "wbanpriv/experiment.hpp"

#include <sstream>
#include <unordered_set>

#include "wbanpriv/protocol.hpp"

namespace wbanpriv::experiment {

using nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::run_game:
      return "run-game";
    case Command::simulate:
      return "simulate";
    case Command::energy_report:
      return "energy-report";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat f) {
  return f == OutputFormat::json ? "json" : "csv";
}

std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::run_game, Command::simulate, Command::energy_report}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  for (auto f : {OutputFormat::json, OutputFormat::csv}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  if (trials < 1) {
    throw ConfigError("trials: must be at least 1");
  }
  if (!(loss_rate >= 0.0 && loss_rate <= 1.0)) {
    throw ConfigError("loss_rate: must be in [0, 1]");
  }
  if (k_bits < crypto::kMinKBits || k_bits > crypto::kDefaultKBits ||
      k_bits % 8 != 0) {
    throw ConfigError("k_bits: must be a multiple of 8 in [32, 128]");
  }
  if (jobs < 1) {
    throw ConfigError("jobs: must be at least 1");
  }
  switch (command) {
    case Command::run_game:
      if (game != 1 && game != 2) {
        throw ConfigError("game: must be 1 or 2");
      }
      if (nodes < 2) {
        throw ConfigError("nodes: attack games need at least 2 nodes");
      }
      break;
    case Command::simulate:
      if (nodes < 1) {
        throw ConfigError("nodes: simulation needs at least 1 node");
      }
      break;
    case Command::energy_report:
      break;
  }
}

adversary::OracleBudget ExperimentSpec::effective_budget() const {
  return budget.value_or(adversary::GameConfig::default_budget(nodes));
}

adversary::GameConfig ExperimentSpec::game_config() const {
  adversary::GameConfig c;
  c.protocol = protocol;
  c.n_nodes = nodes;
  c.k_bits = k_bits;
  c.budget = effective_budget();
  c.seed = seed;
  c.trials = trials;
  return c;
}

std::vector<StrategyRun> run_games(const ExperimentSpec& spec) {
  spec.validate();
  const auto config = spec.game_config();
  const auto game = spec.game == 1 ? adversary::Game::one : adversary::Game::two;

  std::vector<std::pair<std::string, adversary::StrategyFactory>> strategies;
  if (game == adversary::Game::one) {
    strategies.emplace_back("singelee-g1", adversary::strategy_singelee_g1);
  } else {
    strategies.emplace_back("singelee-g2", adversary::strategy_singelee_g2);
  }
  strategies.emplace_back("random-guess", adversary::strategy_random);

  std::vector<StrategyRun> runs;
  for (const auto& [name, factory] : strategies) {
    StrategyRun run;
    run.strategy = name;
    run.results = adversary::run_trials(config, game, factory, spec.jobs);
    run.advantage = adversary::estimate_advantage(run.results);
    runs.push_back(std::move(run));
  }
  return runs;
}

SimulationSummary simulate(const ExperimentSpec& spec) {
  spec.validate();
  const crypto::SeededRng root(spec.seed);
  const crypto::Suite suite(crypto::sha1(), spec.k_bits);
  simnet::Wban wban(spec.nodes, root.fork(1), suite);
  simnet::Channel channel(spec.loss_rate, root.fork(2));

  SimulationSummary s;
  s.rounds = spec.trials;
  s.records.reserve(spec.trials);
  for (std::size_t r = 0; r < spec.trials; ++r) {
    const std::size_t i = r % spec.nodes;
    const bool had_peer = wban.node(i).state.has_peer;
    const auto outcome = wban.run_round(i, channel);
    s.records.push_back({r, i, outcome});

    if (outcome.completed()) {
      ++s.completed;
      if (!wban.synchronized(i)) ++s.sync_violations;
    }
    if (outcome.receiver == protocol::ReceiverMatch::previous) {
      ++s.desync_recoveries;
    }
    if (outcome.receiver == protocol::ReceiverMatch::broadcast && had_peer) {
      ++s.broadcast_fallbacks;
    }
    if ((outcome.announce_delivered && !outcome.verified) ||
        (outcome.response_delivered && !outcome.accepted)) {
      ++s.permanent_desyncs;
    }
  }

  std::unordered_set<protocol::Pseudonym, Block128Hash> seen;
  for (const auto& e : channel.tap().events()) {
    ++s.frames_sent;
    const auto idt = protocol::Pseudonym::from_bytes(ByteView(e.bytes).first(kBlockBytes));
    if (!seen.insert(idt).second) ++s.duplicate_pseudonyms;
  }
  s.pseudonyms_emitted = s.frames_sent;
  std::size_t delivered = 0;
  for (const auto& rec : s.records) {
    delivered += rec.outcome.announce_delivered ? 1 : 0;
    delivered += rec.outcome.response_delivered ? 1 : 0;
  }
  s.frames_lost = s.frames_sent - delivered;
  for (std::size_t i = 0; i < wban.size(); ++i) {
    if (!wban.synchronized(i)) ++s.unsynchronized_at_end;
  }

  energy::EnergyCostModel strict;
  strict.convention = energy::Convention::strict;
  s.energy_per_round = energy::round_energy(strict);
  return s;
}

json energy_to_json(const energy::EnergyReport& r) {
  return json{
      {"convention", std::string(energy::to_string(r.convention))},
      {"bytes", {{"hash", r.bytes.hash}, {"tx", r.bytes.tx}, {"rx", r.bytes.rx}}},
      {"uj",
       {{"compute", r.compute.value()},
        {"tx", r.tx.value()},
        {"rx", r.rx.value()},
        {"total", r.total.value()}}},
      {"uj_tenths",
       {{"compute", r.compute.tenths()},
        {"tx", r.tx.tenths()},
        {"rx", r.rx.tenths()},
        {"total", r.total.tenths()}}},
  };
}

json spec_echo(const ExperimentSpec& spec) {
  const auto b = spec.effective_budget();
  return json{
      {"command", std::string(to_string(spec.command))},
      {"protocol", std::string(adversary::to_string(spec.protocol))},
      {"game", spec.game},
      {"trials", spec.trials},
      {"nodes", spec.nodes},
      {"seed", spec.seed},
      {"budget", {{"q_s", b.q_s}, {"q_r", b.q_r}, {"q_e", b.q_e}}},
      {"loss_rate", spec.loss_rate},
      {"k_bits", spec.k_bits},
      {"format", std::string(to_string(spec.format))},
  };
}

namespace {

json budget_json(const adversary::OracleBudget& b) {
  return json{{"q_s", b.q_s}, {"q_r", b.q_r}, {"q_e", b.q_e}};
}

json advantage_json(const adversary::AdvantageEstimate& a) {
  return json{{"trials", a.trials},   {"wins", a.wins},
              {"win_rate", a.win_rate}, {"ci_low", a.ci_low},
              {"ci_high", a.ci_high}, {"advantage", a.win_rate - 0.5},
              {"ci_contains_half", a.ci_contains(0.5)}};
}

std::pair<energy::EnergyReport, energy::EnergyReport> both_conventions() {
  energy::EnergyCostModel paper;
  energy::EnergyCostModel strict;
  strict.convention = energy::Convention::strict;
  return {energy::round_energy(paper), energy::round_energy(strict)};
}

json energy_block() {
  const auto [paper, strict] = both_conventions();
  return json{{"paper", energy_to_json(paper)}, {"strict", energy_to_json(strict)}};
}

json games_json(const ExperimentSpec& spec, const std::vector<StrategyRun>& runs) {
  json results = json::array();
  for (const auto& run : runs) {
    adversary::OracleBudget total;
    std::size_t aborted = 0;
    for (const auto& r : run.results) {
      total.q_s += r.calls_used.q_s;
      total.q_r += r.calls_used.q_r;
      total.q_e += r.calls_used.q_e;
      aborted += r.aborted ? 1 : 0;
    }
    json entry = advantage_json(run.advantage);
    entry["strategy"] = run.strategy;
    entry["aborted"] = aborted;
    entry["oracle_calls_total"] = budget_json(total);
    results.push_back(std::move(entry));
  }
  json out{{"schema_version", kSchemaVersion},
           {"spec_echo", spec_echo(spec)},
           {"results", std::move(results)}};
  out["advantage"] = advantage_json(runs.front().advantage);
  out["advantage"]["strategy"] = runs.front().strategy;
  out["energy"] = energy_block();
  return out;
}

json simulation_json(const ExperimentSpec& spec, const SimulationSummary& s) {
  json summary{
      {"rounds", s.rounds},
      {"completed", s.completed},
      {"frames_sent", s.frames_sent},
      {"frames_lost", s.frames_lost},
      {"desync_recoveries", s.desync_recoveries},
      {"broadcast_fallbacks", s.broadcast_fallbacks},
      {"permanent_desyncs", s.permanent_desyncs},
      {"sync_violations", s.sync_violations},
      {"pseudonyms_emitted", s.pseudonyms_emitted},
      {"duplicate_pseudonyms", s.duplicate_pseudonyms},
      {"unsynchronized_at_end", s.unsynchronized_at_end},
  };
  return json{{"schema_version", kSchemaVersion},
              {"spec_echo", spec_echo(spec)},
              {"results", json::array({std::move(summary)})},
              {"energy", energy_block()}};
}

json energy_json(const ExperimentSpec& spec) {
  const auto [paper, strict] = both_conventions();
  return json{{"schema_version", kSchemaVersion},
              {"spec_echo", spec_echo(spec)},
              {"results", json::array({energy_to_json(paper), energy_to_json(strict)})},
              {"energy", energy_block()}};
}

std::string games_csv(const std::vector<StrategyRun>& runs) {
  std::ostringstream out;
  out << "strategy,trial,b,guess,win,aborted,q_s,q_r,q_e\n";
  for (const auto& run : runs) {
    for (std::size_t t = 0; t < run.results.size(); ++t) {
      const auto& r = run.results[t];
      out << run.strategy << ',' << t << ',' << r.b << ',' << r.guess << ','
          << (r.win ? 1 : 0) << ',' << (r.aborted ? 1 : 0) << ','
          << r.calls_used.q_s << ',' << r.calls_used.q_r << ','
          << r.calls_used.q_e << '\n';
    }
  }
  return out.str();
}

std::string simulation_csv(const SimulationSummary& s) {
  std::ostringstream out;
  out << "round,node,announce_delivered,verified,response_delivered,accepted,"
         "receiver\n";
  for (const auto& rec : s.records) {
    const auto& o = rec.outcome;
    out << rec.round << ',' << rec.node << ',' << o.announce_delivered << ','
        << o.verified << ',' << o.response_delivered << ',' << o.accepted << ','
        << (o.receiver ? protocol::to_string(*o.receiver) : "none") << '\n';
  }
  return out.str();
}

std::string energy_csv() {
  const auto [paper, strict] = both_conventions();
  std::ostringstream out;
  out << "convention,hash_bytes,tx_bytes,rx_bytes,compute_uj,tx_uj,rx_uj,total_uj\n";
  for (const auto& r : {paper, strict}) {
    out << energy::to_string(r.convention) << ',' << r.bytes.hash << ','
        << r.bytes.tx << ',' << r.bytes.rx << ',' << r.compute.str() << ','
        << r.tx.str() << ',' << r.rx.str() << ',' << r.total.str() << '\n';
  }
  return out.str();
}

}  // namespace

json run_json(const ExperimentSpec& spec) {
  spec.validate();
  switch (spec.command) {
    case Command::run_game:
      return games_json(spec, run_games(spec));
    case Command::simulate:
      return simulation_json(spec, simulate(spec));
    case Command::energy_report:
      return energy_json(spec);
  }
  throw ConfigError("command: unknown");
}

std::string render(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.format == OutputFormat::json) {
    return run_json(spec).dump(2) + "\n";
  }
  switch (spec.command) {
    case Command::run_game:
      return games_csv(run_games(spec));
    case Command::simulate:
      return simulation_csv(simulate(spec));
    case Command::energy_report:
      return energy_csv();
  }
  throw ConfigError("command: unknown");
}

}  // namespace wbanpriv::experiment
