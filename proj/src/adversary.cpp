#include "wbanpriv/adversary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <thread>

#include "wbanpriv/baseline.hpp"
#include "wbanpriv/protocol.hpp"

namespace wbanpriv::adversary {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::proposed:
      return "proposed";
    case ProtocolKind::baseline_flawed:
      return "baseline-flawed";
    case ProtocolKind::baseline_fixed:
      return "baseline-fixed";
  }
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name) {
  for (auto k : {ProtocolKind::proposed, ProtocolKind::baseline_flawed,
                 ProtocolKind::baseline_fixed}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

OracleBudget GameConfig::default_budget(std::size_t n_nodes) {
  return OracleBudget{8, static_cast<std::uint32_t>(n_nodes + 4), 4};
}

void GameConfig::validate() const {
  if (n_nodes < 2) {
    throw ConfigError("n_nodes: games need at least 2 nodes, got " +
                      std::to_string(n_nodes));
  }
  if (trials < 1) {
    throw ConfigError("trials: must be at least 1");
  }
  if (k_bits < crypto::kMinKBits || k_bits > crypto::kDefaultKBits ||
      k_bits % 8 != 0) {
    throw ConfigError("k_bits: must be a multiple of 8 in [32, 128], got " +
                      std::to_string(k_bits));
  }
}

namespace {

Bytes noise64(crypto::SeededRng& rng) {
  Bytes out;
  out.reserve(protocol::kFrameBytes);
  for (std::size_t i = 0; i < protocol::kFrameBytes / kBlockBytes; ++i) {
    const auto block = rng.bytes16();
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

Bytes to_bytes(const protocol::Frame& f) { return Bytes(f.begin(), f.end()); }

class ProposedWorld final : public World {
 public:
  ProposedWorld(std::size_t n_nodes, crypto::SeededRng rng, crypto::Suite suite)
      : wban_(n_nodes, rng.fork(10), suite),
        outsider_(1, rng.fork(11), suite),
        noise_(rng.fork(12)),
        channel_rng_(rng.fork(13)) {}

  std::size_t n_nodes() const override { return wban_.size(); }

  Bytes query_sink(ByteView msg) override {
    if (auto r = wban_.sink_handle(msg)) return to_bytes(*r);
    return noise64(noise_);
  }

  Bytes query_node(std::size_t i, ByteView msg) override {
    return to_bytes(wban_.node_handle(i, msg));
  }

  simnet::Transcript execute(std::size_t i) override {
    simnet::Channel channel(0.0, channel_rng_.fork(executes_++));
    wban_.run_round(i, channel);
    return channel.tap_all();
  }

  Bytes query_outsider(ByteView msg) override {
    return to_bytes(outsider_.node_handle(0, msg));
  }

 private:
  simnet::Wban wban_;
  simnet::Wban outsider_;
  crypto::SeededRng noise_;
  crypto::SeededRng channel_rng_;
  std::uint64_t executes_ = 0;
};

class BaselineWorld final : public World {
 public:
  BaselineWorld(std::size_t n_nodes, baseline::NonceMode mode,
                crypto::SeededRng rng, crypto::Suite suite)
      : wban_(n_nodes, mode, rng.fork(10), suite),
        outsider_(1, mode, rng.fork(11), suite),
        channel_rng_(rng.fork(13)) {}

  std::size_t n_nodes() const override { return wban_.size(); }
  Bytes query_sink(ByteView msg) override { return wban_.query_sink(msg); }
  Bytes query_node(std::size_t i, ByteView msg) override {
    return wban_.query_node(i, msg);
  }
  simnet::Transcript execute(std::size_t i) override {
    simnet::Channel channel(0.0, channel_rng_.fork(executes_++));
    wban_.execute(i, channel);
    return channel.tap_all();
  }
  Bytes query_outsider(ByteView msg) override {
    return outsider_.query_node(0, msg);
  }

 private:
  baseline::BaselineWban wban_;
  baseline::BaselineWban outsider_;
  crypto::SeededRng channel_rng_;
  std::uint64_t executes_ = 0;
};

}  // namespace

std::unique_ptr<World> make_world(ProtocolKind kind, std::size_t n_nodes,
                                  crypto::SeededRng rng, crypto::Suite suite) {
  switch (kind) {
    case ProtocolKind::proposed:
      return std::make_unique<ProposedWorld>(n_nodes, std::move(rng),
                                             std::move(suite));
    case ProtocolKind::baseline_flawed:
      return std::make_unique<BaselineWorld>(
          n_nodes, baseline::NonceMode::shared_deterministic, std::move(rng),
          std::move(suite));
    case ProtocolKind::baseline_fixed:
      return std::make_unique<BaselineWorld>(
          n_nodes, baseline::NonceMode::fresh_random, std::move(rng),
          std::move(suite));
  }
  throw ConfigError("unknown protocol kind");
}

Oracles::Oracles(World& world, OracleBudget budget, crypto::SeededRng rng)
    : world_(world), remaining_(budget), rng_(std::move(rng)) {
  active_.resize(world_.n_nodes());
  for (std::size_t i = 0; i < active_.size(); ++i) active_[i] = i;
}

void Oracles::require_active(std::size_t i) const {
  if (std::find(active_.begin(), active_.end(), i) == active_.end()) {
    throw ConfigError("node index " + std::to_string(i) +
                      " is not part of the WBAN");
  }
}

Bytes Oracles::query_sink(ByteView msg) {
  if (remaining_.q_s == 0) throw BudgetExceeded("Query Sink budget exhausted");
  --remaining_.q_s;
  ++used_.q_s;
  return world_.query_sink(msg);
}

Bytes Oracles::query_node(std::size_t i, ByteView msg) {
  require_active(i);
  if (remaining_.q_r == 0) throw BudgetExceeded("Query Node budget exhausted");
  --remaining_.q_r;
  ++used_.q_r;
  return world_.query_node(i, msg);
}

simnet::Transcript Oracles::execute(std::size_t i) {
  require_active(i);
  if (remaining_.q_e == 0) throw BudgetExceeded("Execute budget exhausted");
  --remaining_.q_e;
  ++used_.q_e;
  return world_.execute(i);
}

Bytes Oracles::query_challenge(int t, ByteView msg) {
  if (!challenge_) {
    throw ConfigError("challenge devices are not available yet");
  }
  if (t != 0 && t != 1) {
    throw ConfigError("challenge slot must be 0 or 1");
  }
  if (remaining_.q_s == 0) throw BudgetExceeded("target query budget exhausted");
  --remaining_.q_s;
  ++used_.q_s;
  return query_device(t == 0 ? challenge_->first : challenge_->second, msg);
}

Bytes Oracles::query_device(const DeviceRef& device, ByteView msg) {
  switch (device.kind) {
    case DeviceRef::Kind::sink:
      return world_.query_sink(msg);
    case DeviceRef::Kind::node:
      return world_.query_node(device.index, msg);
    case DeviceRef::Kind::outsider:
      return world_.query_outsider(msg);
  }
  throw ConfigError("unknown device kind");
}

void Oracles::open_challenge(DeviceRef t0, DeviceRef t1) {
  challenge_ = std::pair{t0, t1};
}

void Oracles::remove_node(std::size_t i) {
  require_active(i);
  active_.erase(std::find(active_.begin(), active_.end(), i));
}

namespace {

ByteArray16 leading_block(ByteView reply) {
  ByteArray16 out{};
  std::copy_n(reply.begin(), std::min(reply.size(), kBlockBytes), out.begin());
  return out;
}

class RandomStrategy final : public Strategy {
 public:
  std::string_view name() const override { return "random-guess"; }
  int decide(Oracles& o) override { return o.rng().coin() ? 1 : 0; }
};

class SingeleeGame1 final : public Strategy {
 public:
  std::string_view name() const override { return "singelee-g1"; }

  void prepare(Oracles& o) override {
    // Harvest (R, PRF_K(n|R)) from one node with two queries.
    const auto node = static_cast<std::size_t>(o.rng().below(o.n_nodes()));
    first_ = o.query_node(node, {});
    second_ = o.query_node(node, first_);
  }

  int decide(Oracles& o) override {
    // The sink shares the node's nonce, so it alone reproduces the successor.
    const auto expected = leading_block(second_);
    const bool m0 = leading_block(o.query_challenge(0, first_)) == expected;
    const bool m1 = leading_block(o.query_challenge(1, first_)) == expected;
    if (m0 != m1) return m0 ? 0 : 1;
    return o.rng().coin() ? 1 : 0;
  }

 private:
  Bytes first_;
  Bytes second_;
};

class SingeleeGame2 final : public Strategy {
 public:
  std::string_view name() const override { return "singelee-g2"; }

  int decide(Oracles& o) override {
    std::array<Bytes, 2> first;
    std::array<Bytes, 2> second;
    for (int t = 0; t < 2; ++t) {
      first[t] = o.query_challenge(t, {});
      second[t] = o.query_challenge(t, first[t]);
    }
    const int c = o.rng().coin() ? 1 : 0;
    const auto expected = leading_block(second[c]);

    bool member = leading_block(o.query_sink(first[c])) == expected;
    for (std::size_t i : o.active_nodes()) {
      if (member) break;
      member = leading_block(o.query_node(i, first[c])) == expected;
    }
    return member ? c : 1 - c;
  }
};

GameResult play(const GameConfig& config, Strategy& strategy, Game game) {
  config.validate();
  const crypto::SeededRng root(config.seed);
  crypto::SeededRng harness = root.fork(1);
  const crypto::Suite suite(crypto::sha1(), config.k_bits);
  auto world = make_world(config.protocol, config.n_nodes, root.fork(2), suite);
  Oracles oracles(*world, config.budget, root.fork(3));

  // The harness commits to its coins before the adversary moves.
  GameResult result;
  result.b = harness.coin() ? 1 : 0;
  const auto chosen = static_cast<std::size_t>(harness.below(config.n_nodes));

  try {
    strategy.prepare(oracles);
    DeviceRef target;
    DeviceRef other;
    if (game == Game::one) {
      target = {DeviceRef::Kind::sink, 0};
      other = {DeviceRef::Kind::node, chosen};
    } else {
      oracles.remove_node(chosen);
      target = {DeviceRef::Kind::node, chosen};
      other = {DeviceRef::Kind::outsider, 0};
    }
    if (result.b == 0) {
      oracles.open_challenge(target, other);
    } else {
      oracles.open_challenge(other, target);
    }
    result.guess = strategy.decide(oracles) & 1;
  } catch (const BudgetExceeded&) {
    result.aborted = true;
  } catch (const ConfigError&) {
    result.aborted = true;
  }
  if (result.aborted) result.guess = 1 - result.b;
  result.win = result.guess == result.b;
  result.calls_used = oracles.used();
  return result;
}

}  // namespace

std::unique_ptr<Strategy> strategy_random() {
  return std::make_unique<RandomStrategy>();
}
std::unique_ptr<Strategy> strategy_singelee_g1() {
  return std::make_unique<SingeleeGame1>();
}
std::unique_ptr<Strategy> strategy_singelee_g2() {
  return std::make_unique<SingeleeGame2>();
}

GameResult run_game1(const GameConfig& config, Strategy& strategy) {
  return play(config, strategy, Game::one);
}

GameResult run_game2(const GameConfig& config, Strategy& strategy) {
  return play(config, strategy, Game::two);
}

GameResult run_game(Game game, const GameConfig& config, Strategy& strategy) {
  return play(config, strategy, game);
}

std::vector<GameResult> run_trials(const GameConfig& config, Game game,
                                   const StrategyFactory& factory,
                                   unsigned jobs) {
  config.validate();
  std::vector<GameResult> results(config.trials);
  auto worker = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < results.size(); t += stride) {
      GameConfig trial = config;
      trial.seed = crypto::mix_seed(config.seed, t);
      auto strategy = factory();
      results[t] = play(trial, *strategy, game);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(results.size())));
  if (jobs == 1) {
    worker(0, 1);
    return results;
  }
  std::vector<std::jthread> pool;
  pool.reserve(jobs);
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker, j, jobs);
  pool.clear();
  return results;
}

AdvantageEstimate wilson_interval(std::size_t wins, std::size_t trials) {
  if (trials == 0) {
    throw ConfigError("wilson_interval: no trials");
  }
  if (wins > trials) {
    throw ConfigError("wilson_interval: wins exceed trials");
  }
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(wins) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;

  AdvantageEstimate e;
  e.trials = trials;
  e.wins = wins;
  e.win_rate = p;
  e.ci_low = std::clamp(center - half, 0.0, p);
  e.ci_high = std::clamp(center + half, p, 1.0);
  return e;
}

AdvantageEstimate estimate_advantage(std::span<const GameResult> results) {
  if (results.empty()) {
    throw ConfigError("estimate_advantage: empty result list");
  }
  const auto wins = static_cast<std::size_t>(std::count_if(
      results.begin(), results.end(), [](const GameResult& r) { return r.win; }));
  return wilson_interval(wins, results.size());
}

}  // namespace wbanpriv::adversary
