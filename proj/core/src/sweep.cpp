#include "qbackbone/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <thread>

#include "qbackbone/errors.hpp"

namespace qbackbone {

std::vector<MemoryCapacity> parse_memory_list(std::string_view list) {
  std::vector<std::uint64_t> finite;
  bool unlimited = false;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    std::string_view item = list.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) {
      if (!list.empty()) throw ConfigError("memory", "empty entry in memory list");
    } else if (item == "unlimited" || item == "inf") {
      unlimited = true;
    } else {
      std::uint64_t m = 0;
      const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), m);
      if (ec != std::errc{} || end != item.data() + item.size()) {
        throw ConfigError("memory", "not a slot count: " + std::string(item));
      }
      if (m < 1) throw ConfigError("memory", "capacity must be ≥ 1 or unlimited");
      finite.push_back(m);
    }
    pos = comma + 1;
  }
  std::sort(finite.begin(), finite.end());
  finite.erase(std::unique(finite.begin(), finite.end()), finite.end());

  std::vector<MemoryCapacity> out;
  for (std::uint64_t m : finite) out.push_back(MemoryCapacity::slots(m));
  if (unlimited) out.push_back(MemoryCapacity::unlimited());
  if (out.empty()) throw ConfigError("memory", "memory list is empty");
  return out;
}

std::string memory_label(const MemoryCapacity& m) {
  return m.is_unlimited() ? "unlimited" : std::to_string(m.slot_count());
}

std::vector<SweepVariant> sweep_variants(const ScenarioConfig& config,
                                         std::optional<PolicyKind> only) {
  std::vector<SweepVariant> out;
  if (only) {
    if (*only == PolicyKind::best_source || *only == PolicyKind::all_sources) {
      ScenarioConfig c = config;
      c.policy = SourcePolicy{*only, ""};
      out.push_back({std::string(policy_name(*only)), std::move(c)});
      return out;
    }
    const SourceKind wanted =
        *only == PolicyKind::fiber_only ? SourceKind::ground_fiber : SourceKind::satellite_pass;
    for (const auto& s : config.sources) {
      if (s.kind() == wanted) out.push_back({s.id, single_source_scenario(config, s.id)});
    }
    return out;
  }
  for (const auto& s : config.sources) {
    out.push_back({s.id, single_source_scenario(config, s.id)});
  }
  if (config.policy.kind == PolicyKind::best_source || config.policy.kind == PolicyKind::all_sources) {
    out.push_back({std::string(policy_name(config.policy.kind)), config});
  }
  return out;
}

std::vector<SweepPoint> run_sweep(const SweepPlan& plan) {
  const std::size_t per_variant = plan.memories.size() * plan.seeds_per_point;
  const std::size_t total = plan.variants.size() * per_variant;
  std::vector<SweepPoint> points(total);

  const auto run_point = [&](std::size_t i) {
    const auto& variant = plan.variants[i / per_variant];
    const std::size_t rest = i % per_variant;
    ScenarioConfig c = variant.config;
    c.memory_capacity = plan.memories[rest / plan.seeds_per_point];
    c.seed = plan.base_seed + rest % plan.seeds_per_point;
    RunResult r = run(c);
    points[i] = SweepPoint{variant.label, c.memory_capacity, c.seed, r.totals};
  };

  unsigned threads = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        run_point(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return points;
}

}  // namespace qbackbone
