#pragma once

// Per-round energy accounting. Amounts are fixed-point tenths of a
// microjoule so regression values compare exactly.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace wbanpriv::energy {

class MicroJoules {
 public:
  constexpr MicroJoules() = default;
  static constexpr MicroJoules from_tenths(std::int64_t tenths) {
    MicroJoules m;
    m.tenths_ = tenths;
    return m;
  }

  constexpr std::int64_t tenths() const { return tenths_; }
  double value() const { return static_cast<double>(tenths_) / 10.0; }
  /// Exact decimal rendering, e.g. "2998.4".
  std::string str() const;

  constexpr MicroJoules operator+(MicroJoules o) const {
    return from_tenths(tenths_ + o.tenths_);
  }
  friend constexpr auto operator<=>(MicroJoules, MicroJoules) = default;

 private:
  std::int64_t tenths_ = 0;
};

enum class Convention {
  /// A flat 32 bytes charged per category.
  paper,
  /// Bytes actually hashed and framed by a node in one round.
  strict,
};

enum class Category { hash, tx, rx };

std::string_view to_string(Convention c);
std::string_view to_string(Category c);

struct EnergyCostModel {
  /// SHA-1 cost and radio costs per byte (5.9, 59.2, 28.6 uJ).
  MicroJoules hash_per_byte = MicroJoules::from_tenths(59);
  MicroJoules tx_per_byte = MicroJoules::from_tenths(592);
  MicroJoules rx_per_byte = MicroJoules::from_tenths(286);
  Convention convention = Convention::paper;

  /// Throws ConfigError on a negative rate.
  void validate() const;
};

struct ByteCounts {
  std::uint64_t hash = 0;
  std::uint64_t tx = 0;
  std::uint64_t rx = 0;

  friend bool operator==(const ByteCounts&, const ByteCounts&) = default;
};

struct EnergyReport {
  Convention convention = Convention::paper;
  ByteCounts bytes;
  MicroJoules compute;
  MicroJoules tx;
  MicroJoules rx;
  MicroJoules total;
};

MicroJoules cost_of(const EnergyCostModel& model, Category category,
                    std::uint64_t bytes);

/// Byte counts charged under Convention::paper.
ByteCounts paper_round_bytes();

/// Runs one honest round and counts the node's hash/prf input bytes and
/// frame bytes sent and received.
ByteCounts measure_node_round_bytes();

EnergyReport report_for(const EnergyCostModel& model, const ByteCounts& bytes);

/// Report for one round under model.convention.
EnergyReport round_energy(const EnergyCostModel& model);

}  // namespace wbanpriv::energy
