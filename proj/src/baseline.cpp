#include "wbanpriv/baseline.hpp"

#include <algorithm>
#include <string>

#include "wbanpriv/protocol.hpp"

namespace wbanpriv::baseline {

using crypto::Suite;

BaselineState make_state(const Digest128& key, const Digest128& pseudonym,
                         NonceMode mode) {
  BaselineState s;
  s.key = key;
  s.pseudonym = pseudonym;
  s.nonce_mode = mode;
  s.nonce_seed = key;
  return s;
}

Nonce shared_nonce(const BaselineState& state, const Suite& suite) {
  std::array<std::uint8_t, 2 * kBlockBytes> input{};
  std::copy(state.nonce_seed.bytes().begin(), state.nonce_seed.bytes().end(),
            input.begin());
  std::uint64_t c = state.shared_counter;
  for (std::size_t i = input.size(); i-- > input.size() - 8;) {
    input[i] = static_cast<std::uint8_t>(c & 0xff);
    c >>= 8;
  }
  return Nonce::from(suite.hash(input));
}

Nonce next_nonce(const BaselineState& state, crypto::SeededRng& rng,
                 const Suite& suite) {
  return state.nonce_mode == NonceMode::shared_deterministic
             ? shared_nonce(state, suite)
             : crypto::gen_nonce(rng, suite);
}

BaselineState baseline_update(const BaselineState& state, const Nonce& n,
                              const Suite& suite) {
  BaselineState next = state;
  next.previous = state.pseudonym;
  next.pseudonym = suite.prf(state.key, concat(n, state.pseudonym));
  next.key = suite.hash(state.key.view());
  next.shared_counter = state.shared_counter + 1;
  return next;
}

Recognition recognize(const BaselineState& state, ByteView query) {
  Recognition found = Recognition::none;
  for (std::size_t off = 0; off + kBlockBytes <= query.size(); off += kBlockBytes) {
    const auto window = Digest128::from_bytes(query.subspan(off, kBlockBytes));
    if (window == state.pseudonym) return Recognition::current;
    if (state.previous && window == *state.previous) found = Recognition::previous;
  }
  return found;
}

namespace {

Bytes to_bytes(const Digest128& d) { return Bytes(d.bytes().begin(), d.bytes().end()); }

}  // namespace

QueryReply baseline_query_response(const BaselineState& state, ByteView query,
                                   crypto::SeededRng& rng, const Suite& suite) {
  switch (recognize(state, query)) {
    case Recognition::current: {
      BaselineState next =
          baseline_update(state, next_nonce(state, rng, suite), suite);
      return {to_bytes(next.pseudonym), std::move(next)};
    }
    case Recognition::previous: {
      // The successor of the previous pseudonym is the current one.
      Bytes reply = to_bytes(state.pseudonym);
      BaselineState next =
          baseline_update(state, next_nonce(state, rng, suite), suite);
      return {std::move(reply), std::move(next)};
    }
    case Recognition::none:
      break;
  }
  if (!state.introduced) {
    Bytes reply = to_bytes(state.pseudonym);
    BaselineState next =
        baseline_update(state, next_nonce(state, rng, suite), suite);
    next.introduced = true;
    return {std::move(reply), std::move(next)};
  }
  const ByteArray16 noise = rng.bytes16();
  return {Bytes(noise.begin(), noise.end()), state};
}

BaselineWban::BaselineWban(std::size_t n_nodes, NonceMode mode,
                           crypto::SeededRng rng, Suite suite)
    : suite_(std::move(suite)), sink_rng_(rng.fork(1)) {
  if (n_nodes == 0) {
    throw ConfigError("a WBAN needs at least one node");
  }
  crypto::SeededRng secrets = rng.fork(0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const Digest128 key(suite_.mask(secrets.bytes16()));
    const Digest128 r0(suite_.mask(secrets.bytes16()));
    const BaselineState s = make_state(key, r0, mode);
    nodes_.push_back(Device{s, rng.fork(100 + i)});
    sink_pairs_.push_back(s);
  }
}

const BaselineState& BaselineWban::node_state(std::size_t i) const {
  if (i >= nodes_.size()) {
    throw ConfigError("node index " + std::to_string(i) + " out of range");
  }
  return nodes_[i].state;
}

const BaselineState& BaselineWban::sink_state(std::size_t i) const {
  if (i >= sink_pairs_.size()) {
    throw ConfigError("node index " + std::to_string(i) + " out of range");
  }
  return sink_pairs_[i];
}

Bytes BaselineWban::query_node(std::size_t i, ByteView query) {
  if (i >= nodes_.size()) {
    throw ConfigError("node index " + std::to_string(i) + " out of range");
  }
  Device& d = nodes_[i];
  auto r = baseline_query_response(d.state, query, d.rng, suite_);
  d.state = std::move(r.state);
  return std::move(r.reply);
}

Bytes BaselineWban::query_sink(ByteView query) {
  // Current-pseudonym matches take precedence over previous ones.
  for (const Recognition wanted : {Recognition::current, Recognition::previous}) {
    for (auto& pair : sink_pairs_) {
      if (recognize(pair, query) != wanted) continue;
      auto r = baseline_query_response(pair, query, sink_rng_, suite_);
      pair = std::move(r.state);
      return std::move(r.reply);
    }
  }
  const ByteArray16 noise = sink_rng_.bytes16();
  return Bytes(noise.begin(), noise.end());
}

void BaselineWban::execute(std::size_t i, simnet::Channel& channel) {
  if (i >= nodes_.size()) {
    throw ConfigError("node index " + std::to_string(i) + " out of range");
  }
  Device& d = nodes_[i];
  const Nonce n = next_nonce(d.state, d.rng, suite_);
  const protocol::WireMessage hello{protocol::Pseudonym::from(d.state.pseudonym),
                                    protocol::kBroadcast, n, Nonce{}};
  if (channel.send(hello.serialize(), simnet::Direction::node_to_sink) !=
      simnet::Delivery::delivered) {
    return;
  }
  const auto at_sink = protocol::WireMessage::parse(*channel.recv());

  protocol::WireMessage reply{};
  const auto pair = std::find_if(
      sink_pairs_.begin(), sink_pairs_.end(), [&](const BaselineState& s) {
        return protocol::Pseudonym::from(s.pseudonym) == at_sink.sender_idt;
      });
  if (pair != sink_pairs_.end()) {
    *pair = baseline_update(*pair, at_sink.n1, suite_);
    reply = {protocol::Pseudonym::from(pair->pseudonym), at_sink.sender_idt,
             Nonce{}, Nonce{}};
  } else {
    reply = {protocol::Pseudonym(sink_rng_.bytes16()), at_sink.sender_idt,
             Nonce{}, Nonce{}};
  }
  if (channel.send(reply.serialize(), simnet::Direction::sink_to_node) !=
      simnet::Delivery::delivered) {
    return;
  }
  const auto at_node = protocol::WireMessage::parse(*channel.recv());
  const BaselineState expected = baseline_update(d.state, n, suite_);
  if (at_node.sender_idt == protocol::Pseudonym::from(expected.pseudonym)) {
    d.state = expected;
  }
}

}  // namespace wbanpriv::baseline
