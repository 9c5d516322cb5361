#ifndef QBACKBONE_INTERFACE_HPP
#define QBACKBONE_INTERFACE_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "qbackbone/entanglement.hpp"
#include "qbackbone/random.hpp"

namespace qbackbone {

inline constexpr double kSpeedOfLightKmPerS = 299792.458;
inline constexpr double kFiberRefractiveIndex = 1.468;

/// Classical part of a hybrid frame, copied unchanged from egress to ingress.
struct FrameHeader {
  std::string source;
  std::string destination;
  std::uint64_t payload_length = 0;

  bool operator==(const FrameHeader&) const = default;
};

struct HybridFrame {
  std::uint64_t frame_id = 0;
  double created_at_s = 0.0;
  std::uint64_t payload_qubits = 0;
  FrameHeader header;
};

/// What happened to a frame's payload at the egress node.
struct TeleportOutcome {
  std::uint64_t frame_id = 0;
  std::uint64_t survivors_at_egress = 0;
  std::uint64_t occupancy_at_arrival = 0;
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t pairs_consumed = 0;
  PairIndexRange consumed;
  /// Surviving payload qubits that found no stored pair.
  std::uint64_t dropped_for_no_pair = 0;

  std::uint64_t teleport_failures() const noexcept { return attempts - successes; }
};

/// Header/trailer plus teleportation corrections, sent over the classical
/// fiber to the ingress.
struct ClassicalMessage {
  std::uint64_t frame_id = 0;
  FrameHeader header;
  PairIndexRange consumed;
  std::uint64_t success_count = 0;
  double send_time_s = 0.0;
  double arrival_time_s = 0.0;
};

/// Fiber propagation delay distance / (c / n).
double classical_latency_s(double distance_km, double refractive_index = kFiberRefractiveIndex);

/// Binomial(n, eta) qubits surviving a lossy access link.
std::uint64_t access_link_survivors(std::uint64_t n, double eta, Rng& rng);

/// Teleports `survivors` payload qubits against the stored pairs. Each
/// attempt consumes one pair whether or not it succeeds; qubits beyond the
/// available pairs are dropped.
std::pair<TeleportOutcome, ClassicalMessage> egress_process(const HybridFrame& frame,
                                                            std::uint64_t survivors,
                                                            QuantumMemoryPair& memories,
                                                            double p_success, double now_s,
                                                            double latency_s, Rng& rng);

/// Applies corrections at the ingress and forwards the reconstructed payload
/// over the outgoing access link. Returns the number of qubits delivered.
/// Throws ProtocolViolation when the message disagrees with the outcome or
/// with the ingress memory's own record of consumed slots.
std::uint64_t ingress_reconstruct(const ClassicalMessage& msg, const TeleportOutcome& outcome,
                                  double egress_access_eta, QuantumMemoryPair& memories,
                                  Rng& rng);

}  // namespace qbackbone

#endif  // QBACKBONE_INTERFACE_HPP
