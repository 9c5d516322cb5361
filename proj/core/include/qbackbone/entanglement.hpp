#ifndef QBACKBONE_ENTANGLEMENT_HPP
#define QBACKBONE_ENTANGLEMENT_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "qbackbone/geometry.hpp"
#include "qbackbone/linkbudget.hpp"
#include "qbackbone/random.hpp"

namespace qbackbone {

inline constexpr double kDefaultEmissionRateHz = 2.0e5;

/// Ground source in the middle of a fiber run: one arm to each station.
struct GroundFiberLink {
  std::array<FiberLink, 2> arms{FiberLink{75.0, kStandardFiberDbPerKm},
                                FiberLink{75.0, kStandardFiberDbPerKm}};
  bool operator==(const GroundFiberLink&) const = default;
};

/// Onboard source on a LEO satellite during one pass.
struct SatelliteDownlink {
  SatellitePassModel pass;
  FreeSpaceLinkParams freespace;
  bool operator==(const SatelliteDownlink&) const = default;
};

enum class SourceKind { ground_fiber, satellite_pass };

struct EntanglementSource {
  std::string id;
  double emission_rate_hz = kDefaultEmissionRateHz;
  std::variant<GroundFiberLink, SatelliteDownlink> link;

  SourceKind kind() const noexcept {
    return std::holds_alternative<GroundFiberLink>(link) ? SourceKind::ground_fiber
                                                         : SourceKind::satellite_pass;
  }
  const SatelliteDownlink* satellite() const noexcept {
    return std::get_if<SatelliteDownlink>(&link);
  }
  const GroundFiberLink* fiber() const noexcept { return std::get_if<GroundFiberLink>(&link); }

  /// Per-arm transmittance at time t (egress arm first).
  std::array<double, 2> arm_transmittance(double t) const;
  double coincidence_probability(double t) const;
  /// Coincident pairs per second arriving at both stations at time t.
  double coincidence_rate_hz(double t) const {
    return emission_rate_hz * coincidence_probability(t);
  }

  void validate() const;
  bool operator==(const EntanglementSource&) const = default;
};

/// Poisson(mean) sample; 0 for a non-positive mean.
std::uint64_t poisson_count(double mean, Rng& rng);

/// Number of coincident pairs emitted at `rate_hz` over `duration_s`, given
/// per-arm transmittances. Poisson(rate * eta_a * eta_b * duration).
std::uint64_t coincidence_count(double rate_hz, double eta_a, double eta_b, double duration_s,
                                Rng& rng);

/// Slot count M, or unlimited.
class MemoryCapacity {
public:
  static MemoryCapacity unlimited() noexcept { return MemoryCapacity{}; }
  static MemoryCapacity slots(std::uint64_t m) noexcept { return MemoryCapacity{m}; }

  bool is_unlimited() const noexcept { return !slots_.has_value(); }
  std::uint64_t slot_count() const { return slots_.value(); }
  std::uint64_t free_slots(std::uint64_t occupancy) const noexcept;

  bool operator==(const MemoryCapacity&) const = default;

private:
  MemoryCapacity() = default;
  explicit MemoryCapacity(std::uint64_t m) : slots_(m) {}
  std::optional<std::uint64_t> slots_;
};

/// Half-open range [begin, end) of pair indices.
struct PairIndexRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  std::uint64_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return begin == end; }
  bool operator==(const PairIndexRange&) const = default;
};

struct StoreResult {
  std::uint64_t stored = 0;
  std::uint64_t dropped = 0;
};

/// Indexed FIFO store of one half of each entangled pair. Arrivals that find
/// the memory full are dropped; stored pairs are never evicted.
class QuantumMemory {
public:
  explicit QuantumMemory(MemoryCapacity capacity) : capacity_(capacity) {}

  StoreResult store(std::uint64_t count) noexcept;
  /// Throws ContractViolation when k exceeds occupancy.
  PairIndexRange consume(std::uint64_t k);

  MemoryCapacity capacity() const noexcept { return capacity_; }
  std::uint64_t occupancy() const noexcept { return next_store_index_ - next_consume_index_; }
  std::uint64_t next_store_index() const noexcept { return next_store_index_; }
  std::uint64_t next_consume_index() const noexcept { return next_consume_index_; }
  std::uint64_t drop_count() const noexcept { return drop_count_; }

  bool operator==(const QuantumMemory&) const = default;

private:
  MemoryCapacity capacity_;
  std::uint64_t next_store_index_ = 0;
  std::uint64_t next_consume_index_ = 0;
  std::uint64_t drop_count_ = 0;
};

/// The egress and ingress memories. Every store and consume is applied to
/// both sides so slot i at the egress always holds the partner of slot i at
/// the ingress. Ranges consumed at the egress are queued until the ingress
/// receives the matching correction message.
class QuantumMemoryPair {
public:
  explicit QuantumMemoryPair(MemoryCapacity capacity) : egress_(capacity), ingress_(capacity) {}

  StoreResult store_pairs(std::uint64_t count) noexcept;
  PairIndexRange consume_pairs(std::uint64_t k);

  /// Ingress side: take the oldest range still waiting for corrections.
  /// Throws ProtocolViolation if `claimed` does not match it.
  PairIndexRange settle_corrections(const PairIndexRange& claimed);

  const QuantumMemory& egress() const noexcept { return egress_; }
  const QuantumMemory& ingress() const noexcept { return ingress_; }
  std::uint64_t occupancy() const noexcept { return egress_.occupancy(); }
  std::size_t awaiting_corrections() const noexcept { return awaiting_.size(); }

  bool mirrored() const noexcept;

private:
  QuantumMemory egress_;
  QuantumMemory ingress_;
  std::deque<PairIndexRange> awaiting_;
};

/// Cumulative coincidence counts per source id.
class PairLedger {
public:
  void record(const std::string& source_id, std::uint64_t count) {
    per_source_[source_id] += count;
  }
  std::uint64_t count(const std::string& source_id) const;
  std::uint64_t total() const noexcept;
  const std::map<std::string, std::uint64_t>& per_source() const noexcept { return per_source_; }

private:
  std::map<std::string, std::uint64_t> per_source_;
};

}  // namespace qbackbone

#endif  // QBACKBONE_ENTANGLEMENT_HPP
