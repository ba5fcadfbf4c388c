#pragma once

// Reference pseudonym scheme the proposed protocol improves on:
//   R_new = PRF_K(n|R_old),  K' = h(K)
// In shared-deterministic mode a node and the sink derive the same nonce for
// the same counter, so both map a pseudonym R to the same successor. That
// equality is what the linking attacks exploit.

#include <cstdint>
#include <optional>
#include <vector>

#include "wbanpriv/bytes.hpp"
#include "wbanpriv/crypto.hpp"
#include "wbanpriv/simnet.hpp"

namespace wbanpriv::baseline {

using crypto::Digest128;
using crypto::Nonce;

enum class NonceMode { shared_deterministic, fresh_random };

struct BaselineState {
  Digest128 key;
  Digest128 pseudonym;
  std::optional<Digest128> previous;
  NonceMode nonce_mode = NonceMode::shared_deterministic;
  std::uint64_t shared_counter = 0;
  /// Pair secret the counter-derived nonces are computed from.
  Digest128 nonce_seed;
  /// Set once the device has answered an unrecognized query with its
  /// current pseudonym.
  bool introduced = false;

  friend bool operator==(const BaselineState&, const BaselineState&) = default;
};

BaselineState make_state(const Digest128& key, const Digest128& pseudonym,
                         NonceMode mode);

/// hash(nonce_seed | counter), counter as a 16-byte big-endian block.
Nonce shared_nonce(const BaselineState& state,
                   const crypto::Suite& suite = crypto::default_suite());

/// The nonce this device uses for its next derivation.
Nonce next_nonce(const BaselineState& state, crypto::SeededRng& rng,
                 const crypto::Suite& suite = crypto::default_suite());

/// R <- PRF_K(n|R_old), K <- h(K), counter + 1. The key update does not
/// take the nonce.
BaselineState baseline_update(const BaselineState& state, const Nonce& n,
                              const crypto::Suite& suite = crypto::default_suite());

enum class Recognition { none, current, previous };

/// Does any 16-byte-aligned window of `query` hold a pseudonym this state
/// knows?
Recognition recognize(const BaselineState& state, ByteView query);

struct QueryReply {
  Bytes reply;
  BaselineState state;
};

/// Device-side answer to a raw query:
///  - carries the current pseudonym R  -> reply PRF_K(n|R), then update
///  - carries the previous pseudonym   -> reply current R (its successor), then update
///  - first unrecognized query ever    -> reply current R, then update
///  - otherwise                        -> 16 fresh random bytes
QueryReply baseline_query_response(
    const BaselineState& state, ByteView query, crypto::SeededRng& rng,
    const crypto::Suite& suite = crypto::default_suite());

/// Sink plus nodes, each pair sharing (K, R) and a nonce seed.
class BaselineWban {
 public:
  BaselineWban(std::size_t n_nodes, NonceMode mode, crypto::SeededRng rng,
               crypto::Suite suite = crypto::default_suite());

  std::size_t size() const { return nodes_.size(); }

  Bytes query_node(std::size_t i, ByteView query);
  /// The sink answers for whichever pair recognizes the query; it has no
  /// pseudonym of its own to introduce, so unrecognized queries get random
  /// bytes.
  Bytes query_sink(ByteView query);

  /// One honest update round over `channel`: node sends (R, n), the sink
  /// finds the pair, both update with n, sink replies with the successor.
  void execute(std::size_t i, simnet::Channel& channel);

  const BaselineState& node_state(std::size_t i) const;
  const BaselineState& sink_state(std::size_t i) const;

 private:
  struct Device {
    BaselineState state;
    crypto::SeededRng rng;
  };

  crypto::Suite suite_;
  std::vector<Device> nodes_;
  std::vector<BaselineState> sink_pairs_;
  crypto::SeededRng sink_rng_;
};

}  // namespace wbanpriv::baseline
