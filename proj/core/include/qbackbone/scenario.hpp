#ifndef QBACKBONE_SCENARIO_HPP
#define QBACKBONE_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbackbone/entanglement.hpp"
#include "qbackbone/geometry.hpp"
#include "qbackbone/linkbudget.hpp"

namespace qbackbone {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kSeedEnvVar = "QBACKBONE_SEED";

enum class PolicyKind { fiber_only, satellite_only, best_source, all_sources };

std::string_view policy_name(PolicyKind kind) noexcept;
std::optional<PolicyKind> parse_policy_name(std::string_view name) noexcept;

struct SourcePolicy {
  PolicyKind kind = PolicyKind::fiber_only;
  /// Source id for fiber-only / satellite-only. Empty for fiber-only means
  /// "the only ground-fiber source".
  std::string source;

  std::string label() const;
  bool operator==(const SourcePolicy&) const = default;
};

struct TrafficModel {
  double qubit_rate_hz = 1.0e8;
  double frame_duration_s = 1.0e-3;
  double mean_interarrival_s = 0.020;

  /// qubit_rate * frame_duration; validate() ensures it is an integer.
  std::uint64_t payload_qubits() const;
  bool operator==(const TrafficModel&) const = default;
};

/// 5 km standard fiber on each side: source node -> egress, ingress ->
/// destination node. Optical-switch insertion loss is added to both.
struct AccessLinks {
  FiberLink into_egress{5.0, kStandardFiberDbPerKm};
  FiberLink out_of_ingress{5.0, kStandardFiberDbPerKm};
  double switch_insertion_loss_db = 0.0;

  double into_egress_transmittance() const;
  double out_of_ingress_transmittance() const;
  bool operator==(const AccessLinks&) const = default;
};

struct ClassicalChannel {
  double distance_km = 150.0;
  double refractive_index = 1.468;
  bool operator==(const ClassicalChannel&) const = default;
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  std::array<GroundStation, 2> stations{munich(), nuremberg()};
  std::vector<EntanglementSource> sources;
  SourcePolicy policy;
  TrafficModel traffic;
  AccessLinks access;
  MemoryCapacity memory_capacity = MemoryCapacity::unlimited();
  double p_teleport_success = 0.5;
  double duration_s = 600.0;
  double bin_width_s = 8.0;
  double channel_step_s = 2.0;
  ClassicalChannel classical;

  const EntanglementSource* find_source(std::string_view id) const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Seconds after 23:18:00 UTC on 26/02/2024, the origin of the default
/// satellite timeline.
inline constexpr double kMiciusPeakS = 158.0;
inline constexpr double kStarlinkPeakS = 229.0;
inline constexpr double kIridiumPeakS = 358.0;

/// Built-in sources: "fiber-standard", "fiber-dark", "Micius",
/// "Starlink-2007", "Iridium-126".
std::optional<EntanglementSource> preset_source(std::string_view id);
std::vector<std::string> preset_source_ids();

/// Defaults: Munich/Nuremberg, standard fiber backbone, unlimited memory.
ScenarioConfig default_scenario();

/// Parses a JSON scenario document. Missing keys take defaults, unknown keys
/// are rejected. Throws ConfigError (syntax errors carry the byte offset).
ScenarioConfig load_config(std::string_view document);
ScenarioConfig load_config_file(const std::filesystem::path& path);

/// Fully expanded JSON form; load_config(dump_config(c)) == c.
std::string dump_config(const ScenarioConfig& config);

/// Copy of `config` running only `source_id` under its single-source policy.
ScenarioConfig single_source_scenario(const ScenarioConfig& config, std::string_view source_id);

struct PolicyDecision {
  double time_s = 0.0;
  std::vector<std::string> active;
  /// Coincidence probability of every configured source, in config order.
  std::vector<std::pair<std::string, double>> probabilities;
};

/// Which sources feed the memories at time t.
PolicyDecision select_sources(const SourcePolicy& policy, double t,
                              std::span<const EntanglementSource> sources);

/// Piecewise-constant coincidence rates, one entry per channel step.
struct StepRates {
  double start_s = 0.0;
  double end_s = 0.0;
  /// (index into config.sources, coincident pairs per second).
  std::vector<std::pair<std::size_t, double>> active;
};

std::vector<StepRates> build_rate_schedule(const ScenarioConfig& config);

}  // namespace qbackbone

#endif  // QBACKBONE_SCENARIO_HPP
