#pragma once

// Oracle-based adversarial model: budgeted Query Sink / Query Node / Execute
// oracles, the two attack games (sink-vs-node distinguishing and WBAN
// membership), linking strategies and win-rate estimation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wbanpriv/bytes.hpp"
#include "wbanpriv/crypto.hpp"
#include "wbanpriv/simnet.hpp"

namespace wbanpriv::adversary {

enum class ProtocolKind { proposed, baseline_flawed, baseline_fixed };

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view name);

enum class Game { one = 1, two = 2 };

/// Remaining calls per oracle. Every call decrements exactly one field; a
/// call at zero throws BudgetExceeded.
struct OracleBudget {
  std::uint32_t q_s = 0;
  std::uint32_t q_r = 0;
  std::uint32_t q_e = 0;

  friend bool operator==(const OracleBudget&, const OracleBudget&) = default;
};

struct GameConfig {
  ProtocolKind protocol = ProtocolKind::proposed;
  std::size_t n_nodes = 5;
  unsigned k_bits = crypto::kDefaultKBits;
  OracleBudget budget = default_budget(5);
  std::uint64_t seed = 1;
  std::size_t trials = 1000;

  /// Enough for every built-in strategy at this WBAN size.
  static OracleBudget default_budget(std::size_t n_nodes);

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Everything an attacker can interact with. Implemented once per protocol.
class World {
 public:
  virtual ~World() = default;
  virtual std::size_t n_nodes() const = 0;
  virtual Bytes query_sink(ByteView msg) = 0;
  virtual Bytes query_node(std::size_t i, ByteView msg) = 0;
  /// One honest round between node i and the sink, as seen on the air.
  virtual simnet::Transcript execute(std::size_t i) = 0;
  /// A node provisioned into a different WBAN.
  virtual Bytes query_outsider(ByteView msg) = 0;
};

std::unique_ptr<World> make_world(ProtocolKind kind, std::size_t n_nodes,
                                  crypto::SeededRng rng,
                                  crypto::Suite suite = crypto::default_suite());

/// A device standing behind a challenge slot T0/T1.
struct DeviceRef {
  enum class Kind { sink, node, outsider } kind;
  std::size_t index = 0;
};

/// The strategy's only view of a game: oracle calls, challenge queries and
/// its own coins. Device state is never exposed.
class Oracles {
 public:
  Oracles(World& world, OracleBudget budget, crypto::SeededRng rng);

  Bytes query_sink(ByteView msg);
  Bytes query_node(std::size_t i, ByteView msg);
  simnet::Transcript execute(std::size_t i);
  /// Query challenge device T_t (t in {0, 1}). Draws from q_s.
  Bytes query_challenge(int t, ByteView msg);

  std::size_t n_nodes() const { return world_.n_nodes(); }
  /// Node indices still in the WBAN.
  const std::vector<std::size_t>& active_nodes() const { return active_; }
  const OracleBudget& remaining() const { return remaining_; }
  const OracleBudget& used() const { return used_; }
  bool challenge_open() const { return challenge_.has_value(); }
  crypto::SeededRng& rng() { return rng_; }

  // Harness side.
  void open_challenge(DeviceRef t0, DeviceRef t1);
  void remove_node(std::size_t i);

 private:
  Bytes query_device(const DeviceRef& device, ByteView msg);
  void require_active(std::size_t i) const;

  World& world_;
  OracleBudget remaining_;
  OracleBudget used_;
  crypto::SeededRng rng_;
  std::vector<std::size_t> active_;
  std::optional<std::pair<DeviceRef, DeviceRef>> challenge_;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string_view name() const = 0;
  /// Phase 1: oracles only.
  virtual void prepare(Oracles& oracles) { (void)oracles; }
  /// Phase 2: challenge devices available. Returns the guess for b.
  virtual int decide(Oracles& oracles) = 0;
};

using StrategyFactory = std::function<std::unique_ptr<Strategy>()>;

/// Fair-coin control.
std::unique_ptr<Strategy> strategy_random();
/// Harvest (R, successor) from one node, query both challenge devices with
/// R, pick the one that answers with the successor.
std::unique_ptr<Strategy> strategy_singelee_g1();
/// Probe both challenge devices twice, replay one device's first reply to
/// the rest of the WBAN, and call it a member if anyone answers with its
/// second reply.
std::unique_ptr<Strategy> strategy_singelee_g2();

struct GameResult {
  int b = 0;
  int guess = 0;
  bool win = false;
  bool aborted = false;
  OracleBudget calls_used;
};

/// One trial seeded by config.seed. A strategy that breaks its budget or
/// addresses a device that does not exist loses the trial.
GameResult run_game1(const GameConfig& config, Strategy& strategy);
GameResult run_game2(const GameConfig& config, Strategy& strategy);
GameResult run_game(Game game, const GameConfig& config, Strategy& strategy);

/// config.trials independent trials; trial t is seeded with
/// mix_seed(config.seed, t). Output is ordered by trial index and does not
/// depend on `jobs`.
std::vector<GameResult> run_trials(const GameConfig& config, Game game,
                                   const StrategyFactory& factory,
                                   unsigned jobs = 1);

struct AdvantageEstimate {
  std::size_t trials = 0;
  std::size_t wins = 0;
  double win_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool ci_contains(double p) const { return ci_low <= p && p <= ci_high; }
};

/// Wilson score interval at 95%.
AdvantageEstimate wilson_interval(std::size_t wins, std::size_t trials);
AdvantageEstimate estimate_advantage(std::span<const GameResult> results);

}  // namespace wbanpriv::adversary
