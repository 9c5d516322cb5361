#include "qbackbone/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qbackbone {

std::string_view event_kind_name(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::frame_generated: return "FrameGenerated";
    case EventKind::frame_at_egress: return "FrameAtEgress";
    case EventKind::classical_at_ingress: return "ClassicalAtIngress";
    case EventKind::frame_delivered: return "FrameDelivered";
    case EventKind::channel_step: return "ChannelStep";
    case EventKind::source_window_edge: return "SourceWindowEdge";
    case EventKind::simulation_end: return "SimulationEnd";
  }
  return "Unknown";
}

double next_frame_interval(Rng& traffic, double mean_interarrival_s) {
  if (!(mean_interarrival_s > 0.0)) throw std::domain_error("mean inter-arrival must be positive");
  std::exponential_distribution<double> gap(1.0 / mean_interarrival_s);
  double dt = gap(traffic);
  // exponential_distribution may return exactly 0; keep frames strictly apart.
  while (dt <= 0.0) dt = gap(traffic);
  return dt;
}

ArrivalCounts integrate_pair_arrivals(double from_s, double to_s,
                                      std::span<const StepRates> schedule,
                                      std::span<const EntanglementSource> sources,
                                      QuantumMemoryPair& memories, Rng& coincidence,
                                      PairLedger& ledger, std::span<MetricsBin> bins,
                                      double bin_width_s) {
  if (from_s > to_s) throw std::domain_error("integration interval is reversed");
  ArrivalCounts total;
  auto step = std::upper_bound(schedule.begin(), schedule.end(), from_s,
                               [](double t, const StepRates& s) { return t < s.start_s; });
  if (step != schedule.begin()) --step;

  double cursor = from_s;
  for (; step != schedule.end() && cursor < to_s; ++step) {
    const double seg_end = std::min(to_s, step->end_s);
    const double dt = seg_end - std::max(cursor, step->start_s);
    cursor = std::max(cursor, seg_end);
    if (dt <= 0.0 || step->active.empty()) continue;

    MetricsBin* bin = nullptr;
    if (!bins.empty() && bin_width_s > 0.0) {
      const auto b = static_cast<std::size_t>(std::floor(step->start_s / bin_width_s + 1e-9));
      bin = &bins[std::min(b, bins.size() - 1)];
    }
    for (const auto& [source_index, rate_hz] : step->active) {
      const std::uint64_t n = poisson_count(rate_hz * dt, coincidence);
      ledger.record(sources[source_index].id, n);
      const StoreResult r = memories.store_pairs(n);
      total.arrived += n;
      total.stored += r.stored;
      total.dropped += r.dropped;
      if (bin) {
        bin->pairs_arrived += n;
        bin->pairs_stored += r.stored;
        bin->pairs_dropped += r.dropped;
      }
    }
  }
  return total;
}

namespace {

struct FrameInFlight {
  HybridFrame frame;
  FrameRecord record;
  ClassicalMessage message;
};

}  // namespace

RunResult run(const ScenarioConfig& config, const RunObserver& observer) {
  config.validate();

  RunResult result;
  result.config = config;
  result.seed = config.seed;

  const double horizon = config.duration_s;
  const std::vector<StepRates> schedule = build_rate_schedule(config);
  RandomStreams rng(config.seed);
  QuantumMemoryPair memories(config.memory_capacity);
  PairLedger ledger;
  for (const auto& s : config.sources) ledger.record(s.id, 0);

  const auto bin_count =
      horizon > 0.0 ? static_cast<std::size_t>(std::ceil(horizon / config.bin_width_s - 1e-9)) : 0;
  result.bins.resize(bin_count);
  for (std::size_t b = 0; b < bin_count; ++b) {
    result.bins[b].bin_start_s = static_cast<double>(b) * config.bin_width_s;
  }

  const double eta_in = config.access.into_egress_transmittance();
  const double eta_out = config.access.out_of_ingress_transmittance();
  const double n_fiber = config.classical.refractive_index;
  const double latency_in = classical_latency_s(config.access.into_egress.length_km, n_fiber);
  const double latency_out = classical_latency_s(config.access.out_of_ingress.length_km, n_fiber);
  const double latency_classical = classical_latency_s(config.classical.distance_km, n_fiber);
  const std::uint64_t payload = config.traffic.payload_qubits();
  const FrameHeader header{config.stations[0].name, config.stations[1].name, payload};

  EventQueue queue;
  std::vector<FrameInFlight> frames;
  double clock = 0.0;
  double integrated_to = 0.0;

  const auto flush = [&](double t) {
    t = std::min(t, horizon);
    if (t <= integrated_to) return;
    integrate_pair_arrivals(integrated_to, t, schedule, config.sources, memories,
                            rng[StreamId::coincidence], ledger, result.bins, config.bin_width_s);
    integrated_to = t;
  };

  if (horizon > 0.0) {
    for (std::size_t k = 1; k < schedule.size(); ++k) {
      queue.schedule(schedule[k].start_s, EventKind::channel_step);
    }
    for (const auto& s : config.sources) {
      const auto* sat = s.satellite();
      if (!sat) continue;
      if (const auto w = visibility_window(sat->pass, sat->freespace.min_elevation_deg)) {
        for (double edge : {w->start_s, w->end_s}) {
          if (edge > 0.0 && edge < horizon) queue.schedule(edge, EventKind::source_window_edge);
        }
      }
    }
    const double first = next_frame_interval(rng[StreamId::traffic], config.traffic.mean_interarrival_s);
    if (first < horizon) queue.schedule(first, EventKind::frame_generated);
  }
  queue.schedule(horizon, EventKind::simulation_end);

  while (!queue.empty()) {
    const Event ev = queue.pop();
    clock = ev.time_s;
    ++result.totals.events;

    switch (ev.kind) {
      case EventKind::frame_generated: {
        FrameInFlight f;
        f.frame = HybridFrame{frames.size(), clock, payload, header};
        f.record.frame_id = f.frame.frame_id;
        f.record.created_at_s = clock;
        f.record.payload_qubits = payload;
        queue.schedule(clock + latency_in, EventKind::frame_at_egress, f.frame.frame_id);
        frames.push_back(std::move(f));

        const double next =
            clock + next_frame_interval(rng[StreamId::traffic], config.traffic.mean_interarrival_s);
        if (next < horizon) queue.schedule(next, EventKind::frame_generated);
        break;
      }
      case EventKind::frame_at_egress: {
        flush(clock);
        auto& f = frames[ev.subject];
        const std::uint64_t survivors =
            access_link_survivors(payload, eta_in, rng[StreamId::ingress_access]);
        f.record.egress_arrival_s = clock;
        f.record.lost_on_ingress_access = payload - survivors;
        auto [outcome, message] = egress_process(f.frame, survivors, memories,
                                                 config.p_teleport_success, clock,
                                                 latency_classical, rng[StreamId::teleport]);
        f.record.teleport = outcome;
        f.message = std::move(message);
        queue.schedule(f.message.arrival_time_s, EventKind::classical_at_ingress, ev.subject);
        break;
      }
      case EventKind::classical_at_ingress: {
        auto& f = frames[ev.subject];
        const std::uint64_t delivered =
            ingress_reconstruct(f.message, f.record.teleport, eta_out, memories,
                                rng[StreamId::egress_access]);
        f.record.delivered = delivered;
        f.record.lost_on_egress_access = f.record.teleport.successes - delivered;
        queue.schedule(clock + latency_out, EventKind::frame_delivered, ev.subject);
        break;
      }
      case EventKind::frame_delivered: {
        auto& f = frames[ev.subject];
        f.record.delivered_at_s = clock;
        if (!result.bins.empty()) {
          const auto b = static_cast<std::size_t>(std::floor(clock / config.bin_width_s));
          auto& bin = result.bins[std::min(b, result.bins.size() - 1)];
          bin.qubits_delivered += f.record.delivered;
          bin.frames_completed += 1;
        }
        break;
      }
      case EventKind::channel_step:
      case EventKind::source_window_edge:
      case EventKind::simulation_end:
        flush(clock);
        break;
    }

    if (observer) observer(EngineSnapshot{ev, clock, memories, queue});
  }

  auto& t = result.totals;
  result.frames.reserve(frames.size());
  for (auto& f : frames) {
    const FrameRecord& r = f.record;
    t.frames += 1;
    t.payload_qubits += r.payload_qubits;
    t.lost_on_ingress_access += r.lost_on_ingress_access;
    t.dropped_for_no_pair += r.teleport.dropped_for_no_pair;
    t.teleport_failures += r.teleport.teleport_failures();
    t.lost_on_egress_access += r.lost_on_egress_access;
    t.qubits_delivered += r.delivered;
    t.pairs_consumed += r.teleport.pairs_consumed;
    result.frames.push_back(std::move(f.record));
  }
  for (const auto& b : result.bins) {
    t.pairs_arrived += b.pairs_arrived;
    t.pairs_stored += b.pairs_stored;
    t.pairs_dropped += b.pairs_dropped;
  }
  t.final_occupancy = memories.occupancy();
  result.pairs_by_source = ledger.per_source();
  return result;
}

}  // namespace qbackbone
