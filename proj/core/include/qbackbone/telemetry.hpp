#ifndef QBACKBONE_TELEMETRY_HPP
#define QBACKBONE_TELEMETRY_HPP

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qbackbone/engine.hpp"
#include "qbackbone/geometry.hpp"
#include "qbackbone/linkbudget.hpp"
#include "qbackbone/sweep.hpp"

// CSV writers. Column order is fixed; numbers are written with '.' as the
// decimal point and no grouping regardless of the global locale.

namespace qbackbone {

inline constexpr const char* kTimeseriesHeader =
    "bin_start_s,pairs_arrived,pairs_stored,pairs_dropped,qubits_delivered,frames_completed";
inline constexpr const char* kFramesHeader =
    "frame_id,created_at_s,egress_arrival_s,delivered_at_s,payload_qubits,"
    "lost_on_ingress_access,survivors_at_egress,occupancy_at_arrival,attempts,successes,"
    "pairs_consumed,consumed_index_begin,consumed_index_end,dropped_for_no_pair,"
    "teleport_failures,lost_on_egress_access,delivered";
inline constexpr const char* kSummaryHeader =
    "seed,frames,payload_qubits,lost_on_ingress_access,dropped_for_no_pair,teleport_failures,"
    "lost_on_egress_access,qubits_delivered,pairs_arrived,pairs_stored,pairs_dropped,"
    "pairs_consumed,final_occupancy";
inline constexpr const char* kSourcesHeader = "source_id,coincidences";
inline constexpr const char* kSweepHeader =
    "source,memory_capacity,seed,total_qubits_delivered,pairs_arrived,pairs_dropped,frames";
inline constexpr const char* kPassesHeader =
    "satellite,altitude_km,min_elevation_deg,window_start_s,window_end_s,window_duration_s,"
    "peak_elevation_egress_deg,peak_elevation_ingress_deg,egress_window_s,ingress_window_s,"
    "min_range_egress_km,min_range_ingress_km";
inline constexpr const char* kAttenuationHeader =
    "time_s,elev_a_deg,elev_b_deg,range_a_km,range_b_km,eta_a,eta_b,p_coincidence";

void write_timeseries_csv(std::ostream& out, const RunResult& result);
void write_frames_csv(std::ostream& out, const RunResult& result);
/// One row of run totals; qubits_delivered equals the sum over bins.
void write_summary_csv(std::ostream& out, const RunResult& result);
void write_sources_csv(std::ostream& out, const RunResult& result);
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);

struct PassSummary {
  std::string satellite;
  double altitude_km = 0.0;
  double min_elevation_deg = 0.0;
  std::optional<VisibilityWindow> window;
  std::array<double, 2> peak_elevation_deg{};
  std::array<double, 2> station_window_s{};
  std::array<double, 2> min_range_km{};
};

PassSummary summarize_pass(const SatellitePassModel& pass, double min_elevation_deg);
void write_passes_csv(std::ostream& out, std::span<const PassSummary> rows);

void write_attenuation_csv(std::ostream& out, std::span<const AttenuationSample> samples);

}  // namespace qbackbone

#endif  // QBACKBONE_TELEMETRY_HPP
