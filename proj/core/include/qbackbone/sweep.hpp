#ifndef QBACKBONE_SWEEP_HPP
#define QBACKBONE_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbackbone/engine.hpp"
#include "qbackbone/scenario.hpp"

namespace qbackbone {

struct SweepVariant {
  std::string label;
  ScenarioConfig config;
};

struct SweepPoint {
  std::string label;
  MemoryCapacity memory_capacity = MemoryCapacity::unlimited();
  std::uint64_t seed = 0;
  RunTotals totals;
};

struct SweepPlan {
  std::vector<SweepVariant> variants;
  std::vector<MemoryCapacity> memories;
  std::size_t seeds_per_point = 10;
  /// Point k of every (variant, M) uses seed base_seed + k.
  std::uint64_t base_seed = 1;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// "10,100,1000,unlimited" -> capacities sorted ascending, unlimited last,
/// duplicates removed. Throws ConfigError on an empty or malformed list.
std::vector<MemoryCapacity> parse_memory_list(std::string_view list);

std::string memory_label(const MemoryCapacity& m);

/// One single-source variant per configured source, in config order, plus a
/// variant for the config's own policy when it is best-source or all-sources.
/// With `only` set, just that policy applied to the configured sources.
std::vector<SweepVariant> sweep_variants(const ScenarioConfig& config,
                                         std::optional<PolicyKind> only = std::nullopt);

/// Runs every (variant, M, seed) point. Runs may execute on several threads;
/// the returned rows are always ordered by (variant, M, seed).
std::vector<SweepPoint> run_sweep(const SweepPlan& plan);

}  // namespace qbackbone

#endif  // QBACKBONE_SWEEP_HPP
