#pragma once

// Pseudonym-ratcheting location-privacy protocol between body-worn nodes and
// their sink.
//
// One round:
//   node  announce   K1 = h(Temp|n1), Idt = PRF_K1(Temp|n2)   -> (Idt, rcv, n1, n2)
//   sink  verify     scan registered templates for a match
//   sink  respond    K2 = h(K1|n2), Idt2 = PRF_K2(Temp|n1)    -> (Idt2, Idt, m1, m2)
//   node  process    recompute Idt2, adopt K2 and (m1, m2)
//   both  ratchet    K' = h(K2|m1), node Idt' = PRF_K'(Temp|m2),
//                                   sink Idt' = PRF_K'(Temp|m1)
//
// Every function is pure in its state argument and returns the successor.

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "wbanpriv/bytes.hpp"
#include "wbanpriv/crypto.hpp"

namespace wbanpriv::protocol {

struct UidTag {};
struct TemplateTag {};
struct PseudonymTag {};

using Uid = Block128<UidTag>;
using Template = Block128<TemplateTag>;
using Pseudonym = Block128<PseudonymTag>;
using crypto::Digest128;
using crypto::Nonce;

/// Receiver pseudonym used before a per-pair sink pseudonym exists.
inline constexpr Pseudonym kBroadcast{};

/// Number of recent sink pseudonyms a pair keeps so a single lost frame
/// does not desynchronize it.
inline constexpr std::size_t kWindow = 2;

inline constexpr std::size_t kFrameBytes = 64;
using Frame = std::array<std::uint8_t, kFrameBytes>;

struct SessionKey {
  Digest128 value;
  std::uint64_t generation = 0;

  friend bool operator==(const SessionKey&, const SessionKey&) = default;
};

enum class Role { node, sink };

enum class Stage {
  idle,        // no exchange in progress
  announced,   // node: announce sent, response pending
  verified,    // sink: announce verified, response not yet sent
  exchanged,   // response sent/accepted, ratchet pending
};

struct PairState {
  Role role = Role::node;
  Stage stage = Stage::idle;
  Template temp;
  std::optional<SessionKey> key;
  Pseudonym my_idt;
  Pseudonym peer_idt;
  Nonce last_n1;
  Nonce last_n2;
  /// Node only: announces sent since the last accepted response.
  std::uint32_t unanswered = 0;
  /// Node only: true once the sink's per-pair pseudonym is known.
  bool has_peer = false;

  friend bool operator==(const PairState&, const PairState&) = default;
};

/// The 64-byte over-the-air frame: sender_idt | receiver_idt | n1 | n2.
struct WireMessage {
  Pseudonym sender_idt;
  Pseudonym receiver_idt;
  Nonce n1;
  Nonce n2;

  Frame serialize() const;
  static WireMessage parse(ByteView bytes);

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

struct NodeHandle {
  std::size_t index = 0;
  friend auto operator<=>(const NodeHandle&, const NodeHandle&) = default;
};

/// How the receiver field of a verified announce matched the sink's window.
enum class ReceiverMatch { broadcast, current, previous };

std::string_view to_string(ReceiverMatch m);

class SinkRegistry {
 public:
  struct Entry {
    Uid uid;
    Template temp;
    /// Most recent committed sink-side states, newest first, at most kWindow.
    std::deque<PairState> window;
    /// (n1, n2) of the most recently accepted announces, newest first.
    std::deque<std::pair<Nonce, Nonce>> recent_announces;
  };

  explicit SinkRegistry(crypto::Suite suite = crypto::default_suite());

  /// Throws ProvisioningError if the Uid is already registered.
  NodeHandle register_node(const Uid& uid);

  std::size_t size() const { return entries_.size(); }
  const Entry& entry(NodeHandle h) const;
  std::optional<NodeHandle> find(const Uid& uid) const;

  /// Sink's current state for a node (fresh sink state if never verified).
  PairState current(NodeHandle h) const;

  /// Records the post-exchange sink state and marks the announce nonces of
  /// `state` as consumed. Keeps the newest kWindow entries.
  void commit(NodeHandle h, const PairState& state, const Nonce& announce_n1,
              const Nonce& announce_n2);

  const crypto::Suite& suite() const { return suite_; }

 private:
  crypto::Suite suite_;
  std::vector<Entry> entries_;
};

struct Step {
  WireMessage message;
  PairState state;
};

struct Verified {
  NodeHandle handle;
  PairState state;
  ReceiverMatch receiver;
};

Template derive_template(const Uid& uid,
                         const crypto::Suite& suite = crypto::default_suite());

/// Fresh node-side state for a provisioned Uid.
PairState make_node_state(const Uid& uid,
                          const crypto::Suite& suite = crypto::default_suite());

/// Steps 1-5. Requires a node-role state.
Step node_announce(const PairState& state, crypto::SeededRng& rng,
                   const crypto::Suite& suite = crypto::default_suite());

/// Steps 6-8: linear scan over registered templates. Absent when nothing
/// matches, when the receiver pseudonym is neither broadcast nor in the
/// pair's window, or when the announce nonces were already consumed.
/// Throws InternalInconsistency if two nodes verify.
std::optional<Verified> sink_verify(const SinkRegistry& registry,
                                    const WireMessage& msg);

/// Sink response. Requires a state returned by sink_verify.
Step sink_respond(const PairState& state, crypto::SeededRng& rng,
                  const crypto::Suite& suite = crypto::default_suite());

/// K' = h(K|n); the node's pseudonym is governed by n', the sink's by n.
PairState ratchet(const PairState& state, const Nonce& n, const Nonce& n_prime,
                  const crypto::Suite& suite = crypto::default_suite());

/// Node-side check of a sink response against the pending announce.
/// Absent (state unchanged) on mismatch.
std::optional<PairState> node_process_response(
    const PairState& state, const WireMessage& msg,
    const crypto::Suite& suite = crypto::default_suite());

/// Node and sink agree on key, pseudonyms and last nonces.
bool synchronized(const PairState& node, const PairState& sink);

}  // namespace wbanpriv::protocol
