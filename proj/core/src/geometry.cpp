#include "qbackbone/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qbackbone {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void check_elevation_and_altitude(double elevation_deg, double altitude_km,
                                  double earth_radius_km) {
  if (!(elevation_deg >= 0.0 && elevation_deg <= 90.0)) {
    throw std::domain_error("elevation must lie in [0, 90] deg, got " +
                            std::to_string(elevation_deg));
  }
  if (!(altitude_km > 0.0) || !std::isfinite(altitude_km)) {
    throw std::domain_error("altitude must be positive, got " +
                            std::to_string(altitude_km));
  }
  if (!(earth_radius_km > 0.0) || !std::isfinite(earth_radius_km)) {
    throw std::domain_error("earth radius must be positive");
  }
}

// Elevation as a function of central angle; negative below the horizon.
double elevation_from_central_angle_deg(double gamma, double ratio) {
  if (gamma <= 0.0) return 90.0;
  return std::atan2(std::cos(gamma) - ratio, std::sin(gamma)) * kRadToDeg;
}

}  // namespace

GroundStation munich() { return {"Munich", 48.0 + 9.0 / 60.0, 11.0 + 32.0 / 60.0}; }

GroundStation nuremberg() { return {"Nuremberg", 49.0 + 26.0 / 60.0, 11.0 + 7.0 / 60.0}; }

void GroundStation::validate() const {
  if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0)) {
    throw std::domain_error("station " + name + ": latitude outside [-90, 90]");
  }
  if (!(longitude_deg >= -180.0 && longitude_deg <= 180.0)) {
    throw std::domain_error("station " + name + ": longitude outside [-180, 180]");
  }
}

double SatellitePassModel::angular_rate_rad_s() const {
  const double r = earth_radius_km + altitude_km;
  return std::sqrt(mu_km3_s2 / (r * r * r));
}

void SatellitePassModel::validate() const {
  if (!(altitude_km > 0.0) || !std::isfinite(altitude_km)) {
    throw std::domain_error(satellite_name + ": altitude must be positive");
  }
  if (!(earth_radius_km > 0.0) || !(mu_km3_s2 > 0.0) ||
      !std::isfinite(earth_radius_km) || !std::isfinite(mu_km3_s2)) {
    throw std::domain_error(satellite_name + ": physical constants must be positive");
  }
  for (const auto& s : stations) {
    if (!(s.peak_elevation_deg > 0.0 && s.peak_elevation_deg <= 90.0)) {
      throw std::domain_error(satellite_name + ": peak elevation outside (0, 90]");
    }
    if (!std::isfinite(s.peak_time_s)) {
      throw std::domain_error(satellite_name + ": peak time must be finite");
    }
  }
  const double w = angular_rate_rad_s();
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw std::domain_error(satellite_name + ": orbital rate is not finite");
  }
}

double slant_range_km(double elevation_deg, double altitude_km, double earth_radius_km) {
  check_elevation_and_altitude(elevation_deg, altitude_km, earth_radius_km);
  const double theta = elevation_deg * kDegToRad;
  const double r = earth_radius_km + altitude_km;
  const double c = earth_radius_km * std::cos(theta);
  return std::sqrt(r * r - c * c) - earth_radius_km * std::sin(theta);
}

double central_angle_rad(double elevation_deg, double altitude_km, double earth_radius_km) {
  check_elevation_and_altitude(elevation_deg, altitude_km, earth_radius_km);
  const double theta = elevation_deg * kDegToRad;
  const double ratio = earth_radius_km / (earth_radius_km + altitude_km);
  // acos(cos 90°) can round to a tiny negative value.
  return std::max(0.0, std::acos(ratio * std::cos(theta)) - theta);
}

std::optional<double> elevation_at(double t, const SatellitePassModel& pass,
                                   Station station) {
  const StationPass& sp = pass.at(station);
  const double phase = pass.angular_rate_rad_s() * (t - sp.peak_time_s);
  if (!std::isfinite(phase) || std::abs(phase) >= std::numbers::pi) return std::nullopt;

  const double gamma_min =
      central_angle_rad(sp.peak_elevation_deg, pass.altitude_km, pass.earth_radius_km);
  const double cos_gamma = std::clamp(std::cos(gamma_min) * std::cos(phase), -1.0, 1.0);
  const double ratio = pass.earth_radius_km / (pass.earth_radius_km + pass.altitude_km);
  const double elevation = phase == 0.0
                               ? sp.peak_elevation_deg
                               : elevation_from_central_angle_deg(std::acos(cos_gamma), ratio);
  if (elevation < 0.0) return std::nullopt;
  return elevation;
}

std::optional<VisibilityWindow> station_window(const SatellitePassModel& pass,
                                               Station station,
                                               double min_elevation_deg) {
  const StationPass& sp = pass.at(station);
  if (sp.peak_elevation_deg < min_elevation_deg) return std::nullopt;
  const double gamma_min =
      central_angle_rad(sp.peak_elevation_deg, pass.altitude_km, pass.earth_radius_km);
  const double gamma_edge =
      central_angle_rad(min_elevation_deg, pass.altitude_km, pass.earth_radius_km);
  const double c = std::clamp(std::cos(gamma_edge) / std::cos(gamma_min), -1.0, 1.0);
  const double half = std::acos(c) / pass.angular_rate_rad_s();
  return VisibilityWindow{sp.peak_time_s - half, sp.peak_time_s + half};
}

std::optional<VisibilityWindow> visibility_window(const SatellitePassModel& pass,
                                                  double min_elevation_deg) {
  const auto a = station_window(pass, Station::egress, min_elevation_deg);
  const auto b = station_window(pass, Station::ingress, min_elevation_deg);
  if (!a || !b) return std::nullopt;
  VisibilityWindow w{std::max(a->start_s, b->start_s), std::min(a->end_s, b->end_s)};
  if (w.start_s > w.end_s) return std::nullopt;
  return w;
}

double ground_distance_km(const GroundStation& a, const GroundStation& b,
                          double earth_radius_km) {
  const double lat1 = a.latitude_deg * kDegToRad;
  const double lat2 = b.latitude_deg * kDegToRad;
  const double dlat = lat2 - lat1;
  const double dlon = (b.longitude_deg - a.longitude_deg) * kDegToRad;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1) * std::cos(lat2) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * earth_radius_km * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

}  // namespace qbackbone
