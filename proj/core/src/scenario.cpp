#include "qbackbone/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qbackbone/errors.hpp"

namespace qbackbone {
namespace {

using json = nlohmann::json;

std::string join_path(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  return j;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join_path(path, key), "unknown key");
    }
  }
}

void read_number(const json& obj, std::string_view key, const std::string& path, double& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number()) throw ConfigError(join_path(path, key), "expected a number");
  out = it->get<double>();
}

void read_unsigned(const json& obj, std::string_view key, const std::string& path,
                   std::uint64_t& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (it->is_number_unsigned()) {
    out = it->get<std::uint64_t>();
  } else if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
    out = static_cast<std::uint64_t>(it->get<std::int64_t>());
  } else {
    throw ConfigError(join_path(path, key), "expected a non-negative integer");
  }
}

void read_string(const json& obj, std::string_view key, const std::string& path,
                 std::string& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_string()) throw ConfigError(join_path(path, key), "expected a string");
  out = it->get<std::string>();
}

GroundStation parse_station(const json& j, const std::string& path, GroundStation s) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"name", "latitude_deg", "longitude_deg"});
  read_string(j, "name", path, s.name);
  read_number(j, "latitude_deg", path, s.latitude_deg);
  read_number(j, "longitude_deg", path, s.longitude_deg);
  return s;
}

FiberLink parse_fiber(const json& j, const std::string& path, FiberLink f) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"length_km", "attenuation_db_per_km"});
  read_number(j, "length_km", path, f.length_km);
  read_number(j, "attenuation_db_per_km", path, f.attenuation_db_per_km);
  return f;
}

FreeSpaceLinkParams parse_freespace(const json& j, const std::string& path,
                                    FreeSpaceLinkParams p) {
  require_object(j, path);
  reject_unknown_keys(j, path,
                      {"divergence_half_angle_rad", "receiver_aperture_diameter_m",
                       "zenith_atmospheric_transmittance", "pointing_loss_db",
                       "system_efficiency", "min_elevation_deg"});
  read_number(j, "divergence_half_angle_rad", path, p.divergence_half_angle_rad);
  read_number(j, "receiver_aperture_diameter_m", path, p.receiver_aperture_diameter_m);
  read_number(j, "zenith_atmospheric_transmittance", path, p.zenith_atmospheric_transmittance);
  read_number(j, "pointing_loss_db", path, p.pointing_loss_db);
  read_number(j, "system_efficiency", path, p.system_efficiency);
  read_number(j, "min_elevation_deg", path, p.min_elevation_deg);
  return p;
}

SatellitePassModel parse_pass(const json& j, const std::string& path, SatellitePassModel p) {
  require_object(j, path);
  reject_unknown_keys(j, path,
                      {"satellite_name", "altitude_km", "egress", "ingress", "earth_radius_km",
                       "mu_km3_s2"});
  read_string(j, "satellite_name", path, p.satellite_name);
  read_number(j, "altitude_km", path, p.altitude_km);
  read_number(j, "earth_radius_km", path, p.earth_radius_km);
  read_number(j, "mu_km3_s2", path, p.mu_km3_s2);
  for (Station st : {Station::egress, Station::ingress}) {
    const char* key = st == Station::egress ? "egress" : "ingress";
    const auto it = j.find(key);
    if (it == j.end()) continue;
    const std::string sub = join_path(path, key);
    require_object(*it, sub);
    reject_unknown_keys(*it, sub, {"peak_elevation_deg", "peak_time_s"});
    auto& sp = p.stations[index_of(st)];
    read_number(*it, "peak_elevation_deg", sub, sp.peak_elevation_deg);
    read_number(*it, "peak_time_s", sub, sp.peak_time_s);
  }
  return p;
}

std::optional<SourceKind> parse_kind(std::string_view s) {
  if (s == "ground-fiber") return SourceKind::ground_fiber;
  if (s == "satellite-pass") return SourceKind::satellite_pass;
  return std::nullopt;
}

std::string_view kind_name(SourceKind k) {
  return k == SourceKind::ground_fiber ? "ground-fiber" : "satellite-pass";
}

EntanglementSource generic_source(const std::string& id, SourceKind kind) {
  EntanglementSource s;
  s.id = id;
  if (kind == SourceKind::ground_fiber) {
    s.link = GroundFiberLink{};
  } else {
    SatellitePassModel pass;
    pass.satellite_name = id;
    s.link = SatelliteDownlink{pass, FreeSpaceLinkParams{}};
  }
  return s;
}

EntanglementSource parse_source(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"id", "kind", "emission_rate_hz", "arms", "pass", "freespace"});
  std::string id;
  read_string(j, "id", path, id);
  if (id.empty()) throw ConfigError(join_path(path, "id"), "required");

  std::optional<SourceKind> kind;
  if (const auto it = j.find("kind"); it != j.end()) {
    if (!it->is_string() || !(kind = parse_kind(it->get<std::string>()))) {
      throw ConfigError(join_path(path, "kind"), "expected \"ground-fiber\" or \"satellite-pass\"");
    }
  }

  std::optional<EntanglementSource> src = preset_source(id);
  if (src && kind && src->kind() != *kind) src.reset();
  if (!src) {
    if (!kind) throw ConfigError(join_path(path, "kind"), "required for non-preset source " + id);
    src = generic_source(id, *kind);
  }

  read_number(j, "emission_rate_hz", path, src->emission_rate_hz);

  if (auto* f = std::get_if<GroundFiberLink>(&src->link)) {
    for (const char* key : {"pass", "freespace"}) {
      if (j.contains(key)) throw ConfigError(join_path(path, key), "not valid for a ground-fiber source");
    }
    if (const auto it = j.find("arms"); it != j.end()) {
      const std::string sub = join_path(path, "arms");
      if (!it->is_array() || it->size() != 2) throw ConfigError(sub, "expected two fiber arms");
      for (std::size_t i = 0; i < 2; ++i) {
        f->arms[i] = parse_fiber((*it)[i], sub + "[" + std::to_string(i) + "]", f->arms[i]);
      }
    }
  } else {
    auto& sat = std::get<SatelliteDownlink>(src->link);
    if (j.contains("arms")) throw ConfigError(join_path(path, "arms"), "not valid for a satellite source");
    if (const auto it = j.find("pass"); it != j.end()) {
      sat.pass = parse_pass(*it, join_path(path, "pass"), sat.pass);
    }
    if (const auto it = j.find("freespace"); it != j.end()) {
      sat.freespace = parse_freespace(*it, join_path(path, "freespace"), sat.freespace);
    }
  }
  return *src;
}

SourcePolicy parse_policy(const json& j) {
  SourcePolicy p;
  std::string name;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else {
    require_object(j, "policy");
    reject_unknown_keys(j, "policy", {"name", "source"});
    read_string(j, "name", "policy", name);
    read_string(j, "source", "policy", p.source);
  }
  const auto kind = parse_policy_name(name);
  if (!kind) {
    throw ConfigError("policy.name",
                      "expected fiber-only, satellite-only, best-source or all-sources");
  }
  p.kind = *kind;
  return p;
}

SourcePolicy natural_policy(const EntanglementSource& s) {
  return {s.kind() == SourceKind::ground_fiber ? PolicyKind::fiber_only
                                               : PolicyKind::satellite_only,
          s.id};
}

json fiber_json(const FiberLink& f) {
  return {{"length_km", f.length_km}, {"attenuation_db_per_km", f.attenuation_db_per_km}};
}

json source_json(const EntanglementSource& s) {
  json j = {{"id", s.id}, {"kind", kind_name(s.kind())}, {"emission_rate_hz", s.emission_rate_hz}};
  if (const auto* f = s.fiber()) {
    j["arms"] = json::array({fiber_json(f->arms[0]), fiber_json(f->arms[1])});
  } else {
    const auto& sat = *s.satellite();
    const auto station = [&](Station st) {
      return json{{"peak_elevation_deg", sat.pass.at(st).peak_elevation_deg},
                  {"peak_time_s", sat.pass.at(st).peak_time_s}};
    };
    j["pass"] = {{"satellite_name", sat.pass.satellite_name},
                 {"altitude_km", sat.pass.altitude_km},
                 {"egress", station(Station::egress)},
                 {"ingress", station(Station::ingress)},
                 {"earth_radius_km", sat.pass.earth_radius_km},
                 {"mu_km3_s2", sat.pass.mu_km3_s2}};
    const auto& fs = sat.freespace;
    j["freespace"] = {{"divergence_half_angle_rad", fs.divergence_half_angle_rad},
                      {"receiver_aperture_diameter_m", fs.receiver_aperture_diameter_m},
                      {"zenith_atmospheric_transmittance", fs.zenith_atmospheric_transmittance},
                      {"pointing_loss_db", fs.pointing_loss_db},
                      {"system_efficiency", fs.system_efficiency},
                      {"min_elevation_deg", fs.min_elevation_deg}};
  }
  return j;
}

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

// Re-throws a component's domain_error as a ConfigError naming its path.
template <class F>
void validate_at(const std::string& path, F&& f) {
  try {
    f();
  } catch (const std::domain_error& e) {
    throw ConfigError(path, e.what());
  }
}

const EntanglementSource* resolve_fiber_only(const SourcePolicy& policy,
                                             std::span<const EntanglementSource> sources) {
  if (!policy.source.empty()) {
    for (const auto& s : sources) {
      if (s.id == policy.source) return &s;
    }
    return nullptr;
  }
  const EntanglementSource* found = nullptr;
  for (const auto& s : sources) {
    if (s.kind() != SourceKind::ground_fiber) continue;
    if (found) return nullptr;
    found = &s;
  }
  return found;
}

}  // namespace

std::string_view policy_name(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::fiber_only: return "fiber-only";
    case PolicyKind::satellite_only: return "satellite-only";
    case PolicyKind::best_source: return "best-source";
    case PolicyKind::all_sources: return "all-sources";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_name(std::string_view name) noexcept {
  for (PolicyKind k : {PolicyKind::fiber_only, PolicyKind::satellite_only,
                       PolicyKind::best_source, PolicyKind::all_sources}) {
    if (policy_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string SourcePolicy::label() const {
  if (source.empty()) return std::string(policy_name(kind));
  return std::string(policy_name(kind)) + "(" + source + ")";
}

std::uint64_t TrafficModel::payload_qubits() const {
  return static_cast<std::uint64_t>(std::llround(qubit_rate_hz * frame_duration_s));
}

double AccessLinks::into_egress_transmittance() const {
  return fiber_transmittance(into_egress) * std::pow(10.0, -switch_insertion_loss_db / 10.0);
}

double AccessLinks::out_of_ingress_transmittance() const {
  return fiber_transmittance(out_of_ingress) * std::pow(10.0, -switch_insertion_loss_db / 10.0);
}

const EntanglementSource* ScenarioConfig::find_source(std::string_view id) const {
  for (const auto& s : sources) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

void ScenarioConfig::validate() const {
  if (schema_version != kSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(schema_version));
  }
  validate_at("stations.egress", [&] { stations[0].validate(); });
  validate_at("stations.ingress", [&] { stations[1].validate(); });

  if (sources.empty()) throw ConfigError("sources", "at least one source is required");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string path = "sources[" + std::to_string(i) + "]";
    validate_at(path, [&] { sources[i].validate(); });
    if (!ids.insert(sources[i].id).second) {
      throw ConfigError(path + ".id", "duplicate source id " + sources[i].id);
    }
  }

  switch (policy.kind) {
    case PolicyKind::fiber_only: {
      const auto* s = resolve_fiber_only(policy, sources);
      if (!s) {
        throw ConfigError("policy.source",
                          policy.source.empty()
                              ? "fiber-only needs a source id when there is not exactly one "
                                "ground-fiber source"
                              : "unknown source " + policy.source);
      }
      if (s->kind() != SourceKind::ground_fiber) {
        throw ConfigError("policy.source", policy.source + " is not a ground-fiber source");
      }
      break;
    }
    case PolicyKind::satellite_only: {
      const auto* s = find_source(policy.source);
      if (!s) throw ConfigError("policy.source", "unknown source " + policy.source);
      if (s->kind() != SourceKind::satellite_pass) {
        throw ConfigError("policy.source", policy.source + " is not a satellite source");
      }
      break;
    }
    case PolicyKind::best_source:
    case PolicyKind::all_sources:
      if (!policy.source.empty()) {
        throw ConfigError("policy.source", "not used by " + std::string(policy_name(policy.kind)));
      }
      break;
  }

  if (!positive_finite(traffic.qubit_rate_hz)) throw ConfigError("traffic.qubit_rate_hz", "must be positive");
  if (!positive_finite(traffic.frame_duration_s)) throw ConfigError("traffic.frame_duration_s", "must be positive");
  if (!positive_finite(traffic.mean_interarrival_s)) throw ConfigError("traffic.mean_interarrival_s", "must be positive");
  const double payload = traffic.qubit_rate_hz * traffic.frame_duration_s;
  if (payload < 1.0 || std::abs(payload - std::round(payload)) > 1e-6 * payload) {
    throw ConfigError("traffic", "qubit_rate_hz * frame_duration_s must be a positive integer");
  }

  validate_at("access.into_egress", [&] { access.into_egress.validate(); });
  validate_at("access.out_of_ingress", [&] { access.out_of_ingress.validate(); });
  if (!(access.switch_insertion_loss_db >= 0.0) || !std::isfinite(access.switch_insertion_loss_db)) {
    throw ConfigError("access.switch_insertion_loss_db", "must be >= 0");
  }

  if (!memory_capacity.is_unlimited() && memory_capacity.slot_count() < 1) {
    throw ConfigError("memory_capacity", "capacity must be ≥ 1 or unlimited");
  }
  if (!(p_teleport_success >= 0.0 && p_teleport_success <= 1.0)) {
    throw ConfigError("p_teleport_success", "must lie in [0, 1]");
  }
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    throw ConfigError("duration_s", "must be >= 0");
  }
  if (!positive_finite(channel_step_s)) throw ConfigError("channel_step_s", "must be positive");
  if (!positive_finite(bin_width_s)) throw ConfigError("bin_width_s", "must be positive");
  const double ratio = bin_width_s / channel_step_s;
  if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ConfigError("bin_width_s", "must be a whole multiple of channel_step_s");
  }
  if (!(classical.distance_km >= 0.0) || !std::isfinite(classical.distance_km)) {
    throw ConfigError("classical.distance_km", "must be >= 0");
  }
  if (!(classical.refractive_index >= 1.0) || !std::isfinite(classical.refractive_index)) {
    throw ConfigError("classical.refractive_index", "must be >= 1");
  }
}

std::optional<EntanglementSource> preset_source(std::string_view id) {
  const auto fiber = [&](double db_per_km) {
    EntanglementSource s;
    s.id = std::string(id);
    s.link = GroundFiberLink{{FiberLink{75.0, db_per_km}, FiberLink{75.0, db_per_km}}};
    return s;
  };
  const auto satellite = [&](double altitude_km, double egress_peak, double ingress_peak,
                             double peak_time) {
    SatellitePassModel pass;
    pass.satellite_name = std::string(id);
    pass.altitude_km = altitude_km;
    pass.stations = {StationPass{egress_peak, peak_time}, StationPass{ingress_peak, peak_time}};
    EntanglementSource s;
    s.id = std::string(id);
    s.link = SatelliteDownlink{pass, FreeSpaceLinkParams{}};
    return s;
  };

  if (id == "fiber-standard") return fiber(kStandardFiberDbPerKm);
  if (id == "fiber-dark") return fiber(kDarkFiberDbPerKm);
  if (id == "Micius") return satellite(474.0, 83.0, 75.0, kMiciusPeakS);
  if (id == "Starlink-2007") return satellite(551.0, 88.0, 75.0, kStarlinkPeakS);
  if (id == "Iridium-126") return satellite(804.0, 76.0, 74.0, kIridiumPeakS);
  return std::nullopt;
}

std::vector<std::string> preset_source_ids() {
  return {"fiber-standard", "fiber-dark", "Micius", "Starlink-2007", "Iridium-126"};
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.sources = {*preset_source("fiber-standard")};
  c.policy = {PolicyKind::fiber_only, "fiber-standard"};
  return c;
}

ScenarioConfig load_config(std::string_view document) {
  json doc;
  if (document.find_first_not_of(" \t\r\n") == std::string_view::npos) return default_scenario();
  try {
    doc = json::parse(document.begin(), document.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  ScenarioConfig c = default_scenario();
  require_object(doc, "(root)");
  reject_unknown_keys(doc, "",
                      {"schema_version", "seed", "stations", "sources", "policy", "traffic",
                       "access", "memory_capacity", "p_teleport_success", "duration_s",
                       "bin_width_s", "channel_step_s", "classical"});

  if (const auto it = doc.find("schema_version"); it != doc.end()) {
    if (!it->is_number_integer()) throw ConfigError("schema_version", "expected an integer");
    c.schema_version = it->get<int>();
  }
  read_unsigned(doc, "seed", "", c.seed);

  if (const auto it = doc.find("stations"); it != doc.end()) {
    require_object(*it, "stations");
    reject_unknown_keys(*it, "stations", {"egress", "ingress"});
    if (it->contains("egress")) c.stations[0] = parse_station((*it)["egress"], "stations.egress", c.stations[0]);
    if (it->contains("ingress")) c.stations[1] = parse_station((*it)["ingress"], "stations.ingress", c.stations[1]);
  }

  bool sources_given = false;
  if (const auto it = doc.find("sources"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("sources", "expected an array");
    sources_given = true;
    c.sources.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      c.sources.push_back(parse_source((*it)[i], "sources[" + std::to_string(i) + "]"));
    }
  }

  if (const auto it = doc.find("policy"); it != doc.end()) {
    c.policy = parse_policy(*it);
  } else if (sources_given) {
    if (c.sources.size() != 1) {
      throw ConfigError("policy", "required when more than one source is defined");
    }
    c.policy = natural_policy(c.sources.front());
  }

  if (const auto it = doc.find("traffic"); it != doc.end()) {
    require_object(*it, "traffic");
    reject_unknown_keys(*it, "traffic", {"qubit_rate_hz", "frame_duration_s", "mean_interarrival_s"});
    read_number(*it, "qubit_rate_hz", "traffic", c.traffic.qubit_rate_hz);
    read_number(*it, "frame_duration_s", "traffic", c.traffic.frame_duration_s);
    read_number(*it, "mean_interarrival_s", "traffic", c.traffic.mean_interarrival_s);
  }

  if (const auto it = doc.find("access"); it != doc.end()) {
    require_object(*it, "access");
    reject_unknown_keys(*it, "access", {"into_egress", "out_of_ingress", "switch_insertion_loss_db"});
    if (it->contains("into_egress")) {
      c.access.into_egress = parse_fiber((*it)["into_egress"], "access.into_egress", c.access.into_egress);
    }
    if (it->contains("out_of_ingress")) {
      c.access.out_of_ingress =
          parse_fiber((*it)["out_of_ingress"], "access.out_of_ingress", c.access.out_of_ingress);
    }
    read_number(*it, "switch_insertion_loss_db", "access", c.access.switch_insertion_loss_db);
  }

  if (const auto it = doc.find("memory_capacity"); it != doc.end()) {
    if (it->is_string() && it->get<std::string>() == "unlimited") {
      c.memory_capacity = MemoryCapacity::unlimited();
    } else {
      std::uint64_t m = 0;
      read_unsigned(doc, "memory_capacity", "", m);
      c.memory_capacity = MemoryCapacity::slots(m);
    }
  }

  read_number(doc, "p_teleport_success", "", c.p_teleport_success);
  read_number(doc, "duration_s", "", c.duration_s);
  read_number(doc, "bin_width_s", "", c.bin_width_s);
  read_number(doc, "channel_step_s", "", c.channel_step_s);

  if (const auto it = doc.find("classical"); it != doc.end()) {
    require_object(*it, "classical");
    reject_unknown_keys(*it, "classical", {"distance_km", "refractive_index"});
    read_number(*it, "distance_km", "classical", c.classical.distance_km);
    read_number(*it, "refractive_index", "classical", c.classical.refractive_index);
  }

  c.validate();
  return c;
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string dump_config(const ScenarioConfig& c) {
  const auto station = [](const GroundStation& s) {
    return json{{"name", s.name}, {"latitude_deg", s.latitude_deg}, {"longitude_deg", s.longitude_deg}};
  };
  json j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  j["stations"] = {{"egress", station(c.stations[0])}, {"ingress", station(c.stations[1])}};
  j["sources"] = json::array();
  for (const auto& s : c.sources) j["sources"].push_back(source_json(s));
  j["policy"] = {{"name", policy_name(c.policy.kind)}, {"source", c.policy.source}};
  j["traffic"] = {{"qubit_rate_hz", c.traffic.qubit_rate_hz},
                  {"frame_duration_s", c.traffic.frame_duration_s},
                  {"mean_interarrival_s", c.traffic.mean_interarrival_s}};
  j["access"] = {{"into_egress", fiber_json(c.access.into_egress)},
                 {"out_of_ingress", fiber_json(c.access.out_of_ingress)},
                 {"switch_insertion_loss_db", c.access.switch_insertion_loss_db}};
  if (c.memory_capacity.is_unlimited()) {
    j["memory_capacity"] = "unlimited";
  } else {
    j["memory_capacity"] = c.memory_capacity.slot_count();
  }
  j["p_teleport_success"] = c.p_teleport_success;
  j["duration_s"] = c.duration_s;
  j["bin_width_s"] = c.bin_width_s;
  j["channel_step_s"] = c.channel_step_s;
  j["classical"] = {{"distance_km", c.classical.distance_km},
                    {"refractive_index", c.classical.refractive_index}};
  return j.dump(2) + "\n";
}

ScenarioConfig single_source_scenario(const ScenarioConfig& config, std::string_view source_id) {
  const EntanglementSource* s = config.find_source(source_id);
  if (!s) {
    auto preset = preset_source(source_id);
    if (!preset) throw ConfigError("source", "unknown source " + std::string(source_id));
    ScenarioConfig c = config;
    c.sources = {*preset};
    c.policy = natural_policy(*preset);
    return c;
  }
  ScenarioConfig c = config;
  const EntanglementSource keep = *s;
  c.sources = {keep};
  c.policy = natural_policy(keep);
  return c;
}

PolicyDecision select_sources(const SourcePolicy& policy, double t,
                              std::span<const EntanglementSource> sources) {
  PolicyDecision d;
  d.time_s = t;
  d.probabilities.reserve(sources.size());
  for (const auto& s : sources) d.probabilities.emplace_back(s.id, s.coincidence_probability(t));

  switch (policy.kind) {
    case PolicyKind::fiber_only:
      if (const auto* s = resolve_fiber_only(policy, sources)) d.active.push_back(s->id);
      break;
    case PolicyKind::satellite_only:
      for (const auto& [id, p] : d.probabilities) {
        if (id == policy.source && p > 0.0) d.active.push_back(id);
      }
      break;
    case PolicyKind::best_source: {
      const std::pair<std::string, double>* best = nullptr;
      for (const auto& entry : d.probabilities) {
        if (entry.second <= 0.0) continue;
        if (!best || entry.second > best->second ||
            (entry.second == best->second && entry.first < best->first)) {
          best = &entry;
        }
      }
      if (best) d.active.push_back(best->first);
      break;
    }
    case PolicyKind::all_sources:
      for (const auto& [id, p] : d.probabilities) {
        if (p > 0.0) d.active.push_back(id);
      }
      break;
  }
  return d;
}

std::vector<StepRates> build_rate_schedule(const ScenarioConfig& config) {
  std::vector<StepRates> steps;
  if (config.duration_s <= 0.0) return steps;
  const auto n = static_cast<std::size_t>(std::ceil(config.duration_s / config.channel_step_s - 1e-9));
  steps.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    StepRates step;
    step.start_s = static_cast<double>(k) * config.channel_step_s;
    step.end_s = std::min(static_cast<double>(k + 1) * config.channel_step_s, config.duration_s);
    const PolicyDecision d = select_sources(config.policy, step.start_s, config.sources);
    for (std::size_t i = 0; i < config.sources.size(); ++i) {
      if (std::find(d.active.begin(), d.active.end(), config.sources[i].id) == d.active.end()) continue;
      step.active.emplace_back(i, config.sources[i].emission_rate_hz * d.probabilities[i].second);
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace qbackbone
