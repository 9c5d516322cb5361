#include "qbackbone/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qbackbone/errors.hpp"

namespace qbackbone {

std::array<double, 2> EntanglementSource::arm_transmittance(double t) const {
  if (const auto* f = fiber()) {
    return {fiber_transmittance(f->arms[0]), fiber_transmittance(f->arms[1])};
  }
  return sample_downlink(t, satellite()->pass, satellite()->freespace).transmittance;
}

double EntanglementSource::coincidence_probability(double t) const {
  const auto eta = arm_transmittance(t);
  return pair_coincidence_probability(eta[0], eta[1]);
}

void EntanglementSource::validate() const {
  if (id.empty()) throw std::domain_error("source id must not be empty");
  if (!(emission_rate_hz > 0.0) || !std::isfinite(emission_rate_hz)) {
    throw std::domain_error("source " + id + ": emission rate must be positive");
  }
  if (const auto* f = fiber()) {
    for (const auto& arm : f->arms) arm.validate();
  } else {
    satellite()->pass.validate();
    satellite()->freespace.validate();
  }
}

std::uint64_t coincidence_count(double rate_hz, double eta_a, double eta_b, double duration_s,
                                Rng& rng) {
  if (!(duration_s >= 0.0) || !(rate_hz >= 0.0)) {
    throw std::domain_error("rate and duration must be non-negative");
  }
  return poisson_count(rate_hz * pair_coincidence_probability(eta_a, eta_b) * duration_s, rng);
}

std::uint64_t poisson_count(double mean, Rng& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> poisson(mean);
  return poisson(rng);
}

std::uint64_t MemoryCapacity::free_slots(std::uint64_t occupancy) const noexcept {
  if (!slots_) return UINT64_MAX - occupancy;
  return *slots_ > occupancy ? *slots_ - occupancy : 0;
}

StoreResult QuantumMemory::store(std::uint64_t count) noexcept {
  const std::uint64_t stored = std::min(count, capacity_.free_slots(occupancy()));
  next_store_index_ += stored;
  drop_count_ += count - stored;
  return {stored, count - stored};
}

PairIndexRange QuantumMemory::consume(std::uint64_t k) {
  if (k > occupancy()) {
    throw ContractViolation("consume of " + std::to_string(k) + " pairs exceeds occupancy " +
                            std::to_string(occupancy()));
  }
  PairIndexRange r{next_consume_index_, next_consume_index_ + k};
  next_consume_index_ = r.end;
  return r;
}

StoreResult QuantumMemoryPair::store_pairs(std::uint64_t count) noexcept {
  // Both sides share one capacity, so the egress check covers the ingress.
  const StoreResult r = egress_.store(count);
  ingress_.store(count);
  return r;
}

PairIndexRange QuantumMemoryPair::consume_pairs(std::uint64_t k) {
  const PairIndexRange r = egress_.consume(k);
  ingress_.consume(k);
  if (!r.empty()) awaiting_.push_back(r);
  return r;
}

PairIndexRange QuantumMemoryPair::settle_corrections(const PairIndexRange& claimed) {
  if (claimed.empty()) return claimed;
  if (awaiting_.empty() || awaiting_.front() != claimed) {
    const PairIndexRange local = awaiting_.empty() ? PairIndexRange{} : awaiting_.front();
    throw ProtocolViolation("correction message names slots [" + std::to_string(claimed.begin) +
                            ", " + std::to_string(claimed.end) + ") but ingress expects [" +
                            std::to_string(local.begin) + ", " + std::to_string(local.end) + ")");
  }
  awaiting_.pop_front();
  return claimed;
}

bool QuantumMemoryPair::mirrored() const noexcept {
  return egress_.occupancy() == ingress_.occupancy() &&
         egress_.next_store_index() == ingress_.next_store_index() &&
         egress_.next_consume_index() == ingress_.next_consume_index();
}

std::uint64_t PairLedger::count(const std::string& source_id) const {
  const auto it = per_source_.find(source_id);
  return it == per_source_.end() ? 0 : it->second;
}

std::uint64_t PairLedger::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& [id, n] : per_source_) sum += n;
  return sum;
}

}  // namespace qbackbone
