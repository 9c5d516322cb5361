#include "qbackbone/interface.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qbackbone/errors.hpp"

namespace qbackbone {
namespace {

std::uint64_t binomial(std::uint64_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability must lie in [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  std::binomial_distribution<std::uint64_t> dist(n, p);
  return dist(rng);
}

}  // namespace

double classical_latency_s(double distance_km, double refractive_index) {
  if (!(distance_km >= 0.0) || !(refractive_index >= 1.0)) {
    throw std::domain_error("distance must be >= 0 and refractive index >= 1");
  }
  return distance_km / (kSpeedOfLightKmPerS / refractive_index);
}

std::uint64_t access_link_survivors(std::uint64_t n, double eta, Rng& rng) {
  return binomial(n, eta, rng);
}

std::pair<TeleportOutcome, ClassicalMessage> egress_process(const HybridFrame& frame,
                                                            std::uint64_t survivors,
                                                            QuantumMemoryPair& memories,
                                                            double p_success, double now_s,
                                                            double latency_s, Rng& rng) {
  if (survivors > frame.payload_qubits) {
    throw ContractViolation("more survivors than payload qubits");
  }
  TeleportOutcome out;
  out.frame_id = frame.frame_id;
  out.survivors_at_egress = survivors;
  out.occupancy_at_arrival = memories.occupancy();
  out.attempts = std::min(survivors, out.occupancy_at_arrival);
  out.consumed = memories.consume_pairs(out.attempts);
  out.pairs_consumed = out.consumed.size();
  out.successes = binomial(out.attempts, p_success, rng);
  out.dropped_for_no_pair = survivors - out.attempts;

  ClassicalMessage msg;
  msg.frame_id = frame.frame_id;
  msg.header = frame.header;
  msg.consumed = out.consumed;
  msg.success_count = out.successes;
  msg.send_time_s = now_s;
  msg.arrival_time_s = now_s + latency_s;
  return {out, msg};
}

std::uint64_t ingress_reconstruct(const ClassicalMessage& msg, const TeleportOutcome& outcome,
                                  double egress_access_eta, QuantumMemoryPair& memories,
                                  Rng& rng) {
  if (msg.frame_id != outcome.frame_id || msg.consumed != outcome.consumed ||
      msg.success_count != outcome.successes) {
    throw ProtocolViolation("classical message for frame " + std::to_string(msg.frame_id) +
                            " does not match the egress outcome");
  }
  memories.settle_corrections(msg.consumed);
  return binomial(outcome.successes, egress_access_eta, rng);
}

}  // namespace qbackbone
