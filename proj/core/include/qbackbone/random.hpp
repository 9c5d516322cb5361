#ifndef QBACKBONE_RANDOM_HPP
#define QBACKBONE_RANDOM_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string_view>

namespace qbackbone {

using Rng = std::mt19937_64;

enum class StreamId : std::size_t {
  traffic = 0,
  coincidence,
  ingress_access,
  teleport,
  egress_access,
};

inline constexpr std::size_t kStreamCount = 5;

std::string_view stream_name(StreamId id) noexcept;

/// Seed for a named substream. Depends only on (master_seed, name), so new
/// streams never shift the sequences of existing ones.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view name) noexcept;

/// Independent generators for one simulation run.
class RandomStreams {
public:
  explicit RandomStreams(std::uint64_t master_seed);

  Rng& operator[](StreamId id) noexcept { return streams_[static_cast<std::size_t>(id)]; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }

private:
  std::uint64_t master_seed_;
  std::array<Rng, kStreamCount> streams_;
};

}  // namespace qbackbone

#endif  // QBACKBONE_RANDOM_HPP
