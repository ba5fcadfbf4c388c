#include "wbanpriv/protocol.hpp"

#include <algorithm>
#include <string>

namespace wbanpriv::protocol {

using crypto::Suite;

Frame WireMessage::serialize() const {
  Frame out{};
  auto it = out.begin();
  it = std::copy(sender_idt.bytes().begin(), sender_idt.bytes().end(), it);
  it = std::copy(receiver_idt.bytes().begin(), receiver_idt.bytes().end(), it);
  it = std::copy(n1.bytes().begin(), n1.bytes().end(), it);
  std::copy(n2.bytes().begin(), n2.bytes().end(), it);
  return out;
}

WireMessage WireMessage::parse(ByteView bytes) {
  if (bytes.size() != kFrameBytes) {
    throw FramingError("wire frame must be 64 bytes, got " +
                       std::to_string(bytes.size()));
  }
  return WireMessage{
      Pseudonym::from_bytes(bytes.subspan(0, kBlockBytes)),
      Pseudonym::from_bytes(bytes.subspan(16, kBlockBytes)),
      Nonce::from_bytes(bytes.subspan(32, kBlockBytes)),
      Nonce::from_bytes(bytes.subspan(48, kBlockBytes)),
  };
}

std::string_view to_string(ReceiverMatch m) {
  switch (m) {
    case ReceiverMatch::broadcast:
      return "broadcast";
    case ReceiverMatch::current:
      return "current";
    case ReceiverMatch::previous:
      return "previous";
  }
  return "unknown";
}

SinkRegistry::SinkRegistry(Suite suite) : suite_(std::move(suite)) {}

NodeHandle SinkRegistry::register_node(const Uid& uid) {
  if (find(uid)) {
    throw ProvisioningError("uid already registered: " + uid.hex());
  }
  Entry e;
  e.uid = uid;
  e.temp = derive_template(uid, suite_);
  entries_.push_back(std::move(e));
  return NodeHandle{entries_.size() - 1};
}

const SinkRegistry::Entry& SinkRegistry::entry(NodeHandle h) const {
  if (h.index >= entries_.size()) {
    throw ConfigError("unknown node handle " + std::to_string(h.index));
  }
  return entries_[h.index];
}

std::optional<NodeHandle> SinkRegistry::find(const Uid& uid) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].uid == uid) return NodeHandle{i};
  }
  return std::nullopt;
}

PairState SinkRegistry::current(NodeHandle h) const {
  const Entry& e = entry(h);
  if (!e.window.empty()) return e.window.front();
  PairState s;
  s.role = Role::sink;
  s.temp = e.temp;
  return s;
}

void SinkRegistry::commit(NodeHandle h, const PairState& state,
                          const Nonce& announce_n1, const Nonce& announce_n2) {
  if (h.index >= entries_.size()) {
    throw ConfigError("unknown node handle " + std::to_string(h.index));
  }
  Entry& e = entries_[h.index];
  e.window.push_front(state);
  e.recent_announces.emplace_front(announce_n1, announce_n2);
  while (e.window.size() > kWindow) e.window.pop_back();
  while (e.recent_announces.size() > kWindow) e.recent_announces.pop_back();
}

Template derive_template(const Uid& uid, const Suite& suite) {
  return Template::from(suite.hash(uid.view()));
}

PairState make_node_state(const Uid& uid, const Suite& suite) {
  PairState s;
  s.role = Role::node;
  s.temp = derive_template(uid, suite);
  return s;
}

Step node_announce(const PairState& state, crypto::SeededRng& rng,
                   const Suite& suite) {
  if (state.role != Role::node) {
    throw ProtocolOrderError("node_announce requires a node-role state");
  }
  const Nonce n1 = crypto::gen_nonce(rng, suite);
  const Nonce n2 = crypto::gen_nonce(rng, suite);
  const Digest128 k = suite.hash(concat(state.temp, n1));
  const auto idt = Pseudonym::from(suite.prf(k, concat(state.temp, n2)));

  // After kWindow unanswered announces the sink may have moved past every
  // pseudonym we know, so fall back to broadcast.
  const bool address_peer = state.has_peer && state.unanswered < kWindow;

  PairState next = state;
  next.stage = Stage::announced;
  next.key = SessionKey{k, 0};
  next.my_idt = idt;
  next.last_n1 = n1;
  next.last_n2 = n2;
  next.unanswered = state.unanswered + 1;

  WireMessage msg{idt, address_peer ? state.peer_idt : kBroadcast, n1, n2};
  return Step{msg, std::move(next)};
}

std::optional<Verified> sink_verify(const SinkRegistry& registry,
                                    const WireMessage& msg) {
  const Suite& suite = registry.suite();
  std::optional<NodeHandle> match;
  Digest128 match_key;
  for (std::size_t i = 0; i < registry.size(); ++i) {
    const auto& e = registry.entry(NodeHandle{i});
    const Digest128 k = suite.hash(concat(e.temp, msg.n1));
    if (Pseudonym::from(suite.prf(k, concat(e.temp, msg.n2))) != msg.sender_idt) {
      continue;
    }
    if (match) {
      throw InternalInconsistency(
          "announce verifies for two registered nodes (128-bit collision)");
    }
    match = NodeHandle{i};
    match_key = k;
  }
  if (!match) return std::nullopt;

  const auto& e = registry.entry(*match);
  const auto replayed = std::find(e.recent_announces.begin(),
                                  e.recent_announces.end(),
                                  std::pair{msg.n1, msg.n2});
  if (replayed != e.recent_announces.end()) return std::nullopt;

  ReceiverMatch receiver;
  if (msg.receiver_idt == kBroadcast) {
    receiver = ReceiverMatch::broadcast;
  } else if (!e.window.empty() && e.window[0].my_idt == msg.receiver_idt) {
    receiver = ReceiverMatch::current;
  } else if (e.window.size() > 1 && e.window[1].my_idt == msg.receiver_idt) {
    receiver = ReceiverMatch::previous;
  } else {
    return std::nullopt;
  }

  PairState s = registry.current(*match);
  s.role = Role::sink;
  s.stage = Stage::verified;
  s.key = SessionKey{match_key, 0};
  s.peer_idt = msg.sender_idt;
  s.last_n1 = msg.n1;
  s.last_n2 = msg.n2;
  return Verified{*match, std::move(s), receiver};
}

Step sink_respond(const PairState& state, crypto::SeededRng& rng,
                  const Suite& suite) {
  if (state.role != Role::sink || state.stage != Stage::verified ||
      !state.key) {
    throw ProtocolOrderError("sink_respond called before sink_verify");
  }
  const Digest128 k2 = suite.hash(concat(state.key->value, state.last_n2));
  const auto idt2 = Pseudonym::from(suite.prf(k2, concat(state.temp, state.last_n1)));
  const Nonce m1 = crypto::gen_nonce(rng, suite);
  const Nonce m2 = crypto::gen_nonce(rng, suite);

  PairState next = state;
  next.stage = Stage::exchanged;
  next.key = SessionKey{k2, state.key->generation + 1};
  next.my_idt = idt2;
  next.last_n1 = m1;
  next.last_n2 = m2;

  return Step{WireMessage{idt2, state.peer_idt, m1, m2}, std::move(next)};
}

PairState ratchet(const PairState& state, const Nonce& n, const Nonce& n_prime,
                  const Suite& suite) {
  if (!state.key) {
    throw ProtocolOrderError("ratchet requires a current session key");
  }
  const Digest128 k = suite.hash(concat(state.key->value, n));
  const auto node_idt = Pseudonym::from(suite.prf(k, concat(state.temp, n_prime)));
  const auto sink_idt = Pseudonym::from(suite.prf(k, concat(state.temp, n)));

  PairState next = state;
  next.stage = Stage::idle;
  next.key = SessionKey{k, state.key->generation + 1};
  if (state.role == Role::node) {
    next.my_idt = node_idt;
    next.peer_idt = sink_idt;
    next.has_peer = true;
  } else {
    next.my_idt = sink_idt;
    next.peer_idt = node_idt;
  }
  return next;
}

std::optional<PairState> node_process_response(const PairState& state,
                                               const WireMessage& msg,
                                               const Suite& suite) {
  if (state.role != Role::node || state.stage != Stage::announced ||
      !state.key) {
    return std::nullopt;
  }
  if (msg.receiver_idt != state.my_idt) return std::nullopt;

  const Digest128 k2 = suite.hash(concat(state.key->value, state.last_n2));
  const auto expected =
      Pseudonym::from(suite.prf(k2, concat(state.temp, state.last_n1)));
  if (expected != msg.sender_idt) return std::nullopt;

  PairState next = state;
  next.stage = Stage::exchanged;
  next.key = SessionKey{k2, state.key->generation + 1};
  next.peer_idt = expected;
  next.has_peer = true;
  next.last_n1 = msg.n1;
  next.last_n2 = msg.n2;
  next.unanswered = 0;
  return next;
}

bool synchronized(const PairState& node, const PairState& sink) {
  return node.key && sink.key && *node.key == *sink.key &&
         node.my_idt == sink.peer_idt && node.peer_idt == sink.my_idt &&
         node.last_n1 == sink.last_n1 && node.last_n2 == sink.last_n2;
}

}  // namespace wbanpriv::protocol
