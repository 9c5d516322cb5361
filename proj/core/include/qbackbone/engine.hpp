#ifndef QBACKBONE_ENGINE_HPP
#define QBACKBONE_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qbackbone/entanglement.hpp"
#include "qbackbone/event_queue.hpp"
#include "qbackbone/interface.hpp"
#include "qbackbone/random.hpp"
#include "qbackbone/scenario.hpp"

namespace qbackbone {

/// Counters for one [bin_start_s, bin_start_s + bin_width) interval. Pair
/// counts are attributed by arrival time, qubits and frames by delivery
/// time; deliveries after the horizon land in the last bin.
struct MetricsBin {
  double bin_start_s = 0.0;
  std::uint64_t pairs_arrived = 0;
  std::uint64_t pairs_stored = 0;
  std::uint64_t pairs_dropped = 0;
  std::uint64_t qubits_delivered = 0;
  std::uint64_t frames_completed = 0;

  bool operator==(const MetricsBin&) const = default;
};

/// Full fate of one frame's payload. The loss terms plus `delivered` always
/// sum to `payload_qubits`.
struct FrameRecord {
  std::uint64_t frame_id = 0;
  double created_at_s = 0.0;
  double egress_arrival_s = 0.0;
  double delivered_at_s = 0.0;
  std::uint64_t payload_qubits = 0;
  /// Lost on the access link from the source node into the egress.
  std::uint64_t lost_on_ingress_access = 0;
  TeleportOutcome teleport;
  /// Lost on the access link from the ingress to the destination node.
  std::uint64_t lost_on_egress_access = 0;
  std::uint64_t delivered = 0;

  std::uint64_t accounted() const noexcept {
    return lost_on_ingress_access + teleport.dropped_for_no_pair + teleport.teleport_failures() +
           lost_on_egress_access + delivered;
  }
};

struct RunTotals {
  std::uint64_t frames = 0;
  std::uint64_t payload_qubits = 0;
  std::uint64_t lost_on_ingress_access = 0;
  std::uint64_t dropped_for_no_pair = 0;
  std::uint64_t teleport_failures = 0;
  std::uint64_t lost_on_egress_access = 0;
  std::uint64_t qubits_delivered = 0;
  std::uint64_t pairs_arrived = 0;
  std::uint64_t pairs_stored = 0;
  std::uint64_t pairs_dropped = 0;
  std::uint64_t pairs_consumed = 0;
  std::uint64_t final_occupancy = 0;
  std::uint64_t events = 0;

  bool operator==(const RunTotals&) const = default;
};

struct RunResult {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::vector<MetricsBin> bins;
  std::vector<FrameRecord> frames;
  /// Coincident pairs per source id over the whole run.
  std::map<std::string, std::uint64_t> pairs_by_source;
  RunTotals totals;
};

/// State handed to a run observer after every event.
struct EngineSnapshot {
  const Event& event;
  double clock_s;
  const QuantumMemoryPair& memories;
  const EventQueue& pending;
};

using RunObserver = std::function<void(const EngineSnapshot&)>;

/// Exponential frame inter-arrival time.
double next_frame_interval(Rng& traffic, double mean_interarrival_s = 0.020);

struct ArrivalCounts {
  std::uint64_t arrived = 0;
  std::uint64_t stored = 0;
  std::uint64_t dropped = 0;
};

/// Samples coincident pairs over [from_s, to_s) step by step against the
/// rate schedule and stores them in chronological order. When `bins` is
/// non-empty, counts are also added to the bin holding each step.
ArrivalCounts integrate_pair_arrivals(double from_s, double to_s,
                                      std::span<const StepRates> schedule,
                                      std::span<const EntanglementSource> sources,
                                      QuantumMemoryPair& memories, Rng& coincidence,
                                      PairLedger& ledger, std::span<MetricsBin> bins = {},
                                      double bin_width_s = 0.0);

/// Runs one scenario to completion. Throws ConfigError before any event
/// executes if the config is invalid.
RunResult run(const ScenarioConfig& config, const RunObserver& observer = {});

}  // namespace qbackbone

#endif  // QBACKBONE_ENGINE_HPP
