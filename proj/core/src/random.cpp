#include "qbackbone/random.hpp"

namespace qbackbone {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view stream_name(StreamId id) noexcept {
  switch (id) {
    case StreamId::traffic: return "traffic";
    case StreamId::coincidence: return "coincidence";
    case StreamId::ingress_access: return "ingress_access";
    case StreamId::teleport: return "teleport";
    case StreamId::egress_access: return "egress_access";
  }
  return "unknown";
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view name) noexcept {
  return splitmix64(splitmix64(master_seed) ^ fnv1a(name));
}

RandomStreams::RandomStreams(std::uint64_t master_seed) : master_seed_(master_seed) {
  for (std::size_t i = 0; i < kStreamCount; ++i) {
    streams_[i].seed(derive_seed(master_seed, stream_name(static_cast<StreamId>(i))));
  }
}

}  // namespace qbackbone
