#ifndef QBACKBONE_GEOMETRY_HPP
#define QBACKBONE_GEOMETRY_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>

namespace qbackbone {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kEarthMuKm3PerS2 = 398600.4418;

/// The two edge nodes joined by the backbone. Used to index per-station data.
enum class Station : std::size_t { egress = 0, ingress = 1 };

inline constexpr std::size_t index_of(Station s) noexcept {
  return static_cast<std::size_t>(s);
}

struct GroundStation {
  std::string name;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;

  void validate() const;
  bool operator==(const GroundStation&) const = default;
};

/// Munich egress node, 48°09' N 11°32' E.
GroundStation munich();
/// Nuremberg ingress node, 49°26' N 11°07' E.
GroundStation nuremberg();

struct StationPass {
  double peak_elevation_deg = 90.0;
  double peak_time_s = 0.0;

  bool operator==(const StationPass&) const = default;
};

/// One overhead pass of a satellite on a circular orbit, described per
/// station by its culmination elevation and time. Earth rotation is ignored,
/// so the ground track is a great circle and each station sees a symmetric
/// pass.
struct SatellitePassModel {
  std::string satellite_name;
  double altitude_km = 500.0;
  std::array<StationPass, 2> stations{};
  double earth_radius_km = kEarthRadiusKm;
  double mu_km3_s2 = kEarthMuKm3PerS2;

  const StationPass& at(Station s) const { return stations[index_of(s)]; }

  /// Orbital angular rate sqrt(mu / r^3) in rad/s.
  double angular_rate_rad_s() const;

  void validate() const;
  bool operator==(const SatellitePassModel&) const = default;
};

struct VisibilityWindow {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration_s() const noexcept { return end_s - start_s; }
  bool contains(double t) const noexcept { return t >= start_s && t <= end_s; }
  bool operator==(const VisibilityWindow&) const = default;
};

/// Line-of-sight distance from a station to a satellite at the given
/// elevation. Throws std::domain_error outside 0..90 deg or for altitude <= 0.
double slant_range_km(double elevation_deg, double altitude_km,
                      double earth_radius_km = kEarthRadiusKm);

/// Earth-central angle between the station and the sub-satellite point.
double central_angle_rad(double elevation_deg, double altitude_km,
                         double earth_radius_km = kEarthRadiusKm);

/// Elevation seen from `station` at time t, or nullopt while the satellite is
/// below the horizon. Only the pass around the configured peak is modelled;
/// times more than half an orbit away are always below the horizon.
std::optional<double> elevation_at(double t, const SatellitePassModel& pass,
                                   Station station);

/// Interval around the peak during which `station` sees the satellite at or
/// above `min_elevation_deg`.
std::optional<VisibilityWindow> station_window(const SatellitePassModel& pass,
                                               Station station,
                                               double min_elevation_deg);

/// Intersection of both stations' windows.
std::optional<VisibilityWindow> visibility_window(const SatellitePassModel& pass,
                                                  double min_elevation_deg);

/// Haversine great-circle distance.
double ground_distance_km(const GroundStation& a, const GroundStation& b,
                          double earth_radius_km = kEarthRadiusKm);

}  // namespace qbackbone

#endif  // QBACKBONE_GEOMETRY_HPP
