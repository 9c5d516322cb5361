#include "qbackbone/telemetry.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <iterator>

namespace qbackbone {
namespace {

// fmt's default double formatting is the shortest round-trip form and does
// not consult the locale.
std::string num(double x) { return fmt::format("{}", x); }

std::string opt(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

}  // namespace

void write_timeseries_csv(std::ostream& out, const RunResult& result) {
  std::string buf = std::string(kTimeseriesHeader) + "\n";
  for (const auto& b : result.bins) {
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{}\n", num(b.bin_start_s),
                   b.pairs_arrived, b.pairs_stored, b.pairs_dropped, b.qubits_delivered,
                   b.frames_completed);
  }
  out << buf;
}

void write_frames_csv(std::ostream& out, const RunResult& result) {
  std::string buf = std::string(kFramesHeader) + "\n";
  for (const auto& f : result.frames) {
    const auto& t = f.teleport;
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                   f.frame_id, num(f.created_at_s), num(f.egress_arrival_s),
                   num(f.delivered_at_s), f.payload_qubits, f.lost_on_ingress_access,
                   t.survivors_at_egress, t.occupancy_at_arrival, t.attempts, t.successes,
                   t.pairs_consumed, t.consumed.begin, t.consumed.end, t.dropped_for_no_pair,
                   t.teleport_failures(), f.lost_on_egress_access, f.delivered);
  }
  out << buf;
}

void write_summary_csv(std::ostream& out, const RunResult& result) {
  const auto& t = result.totals;
  out << kSummaryHeader << '\n'
      << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", result.seed, t.frames,
                     t.payload_qubits, t.lost_on_ingress_access, t.dropped_for_no_pair,
                     t.teleport_failures, t.lost_on_egress_access, t.qubits_delivered,
                     t.pairs_arrived, t.pairs_stored, t.pairs_dropped, t.pairs_consumed,
                     t.final_occupancy);
}

void write_sources_csv(std::ostream& out, const RunResult& result) {
  out << kSourcesHeader << '\n';
  // Config order, not map order.
  for (const auto& s : result.config.sources) {
    const auto it = result.pairs_by_source.find(s.id);
    out << s.id << ',' << (it == result.pairs_by_source.end() ? 0 : it->second) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  std::string buf = std::string(kSweepHeader) + "\n";
  for (const auto& p : points) {
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{}\n", p.label,
                   memory_label(p.memory_capacity), p.seed, p.totals.qubits_delivered,
                   p.totals.pairs_arrived, p.totals.pairs_dropped, p.totals.frames);
  }
  out << buf;
}

PassSummary summarize_pass(const SatellitePassModel& pass, double min_elevation_deg) {
  PassSummary s;
  s.satellite = pass.satellite_name;
  s.altitude_km = pass.altitude_km;
  s.min_elevation_deg = min_elevation_deg;
  s.window = visibility_window(pass, min_elevation_deg);
  for (Station st : {Station::egress, Station::ingress}) {
    const std::size_t i = index_of(st);
    s.peak_elevation_deg[i] = pass.at(st).peak_elevation_deg;
    const auto w = station_window(pass, st, min_elevation_deg);
    s.station_window_s[i] = w ? w->duration_s() : 0.0;
    s.min_range_km[i] = slant_range_km(s.peak_elevation_deg[i], pass.altitude_km, pass.earth_radius_km);
  }
  return s;
}

void write_passes_csv(std::ostream& out, std::span<const PassSummary> rows) {
  std::string buf = std::string(kPassesHeader) + "\n";
  for (const auto& r : rows) {
    const std::optional<double> start = r.window ? std::optional(r.window->start_s) : std::nullopt;
    const std::optional<double> end = r.window ? std::optional(r.window->end_s) : std::nullopt;
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{},{},{}\n", r.satellite,
                   num(r.altitude_km), num(r.min_elevation_deg), opt(start), opt(end),
                   num(r.window ? r.window->duration_s() : 0.0), num(r.peak_elevation_deg[0]),
                   num(r.peak_elevation_deg[1]), num(r.station_window_s[0]),
                   num(r.station_window_s[1]), num(r.min_range_km[0]), num(r.min_range_km[1]));
  }
  out << buf;
}

void write_attenuation_csv(std::ostream& out, std::span<const AttenuationSample> samples) {
  std::string buf = std::string(kAttenuationHeader) + "\n";
  for (const auto& s : samples) {
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{}\n", num(s.time_s),
                   opt(s.elevation_deg[0]), opt(s.elevation_deg[1]), opt(s.slant_range_km[0]),
                   opt(s.slant_range_km[1]), num(s.transmittance[0]), num(s.transmittance[1]),
                   num(s.coincidence_probability()));
  }
  out << buf;
}

}  // namespace qbackbone
