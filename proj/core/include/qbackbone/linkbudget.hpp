#ifndef QBACKBONE_LINKBUDGET_HPP
#define QBACKBONE_LINKBUDGET_HPP

#include <array>
#include <optional>
#include <vector>

#include "qbackbone/geometry.hpp"

namespace qbackbone {

struct FiberLink {
  double length_km = 0.0;
  double attenuation_db_per_km = 0.2;

  void validate() const;
  bool operator==(const FiberLink&) const = default;
};

inline constexpr double kStandardFiberDbPerKm = 0.2;
inline constexpr double kDarkFiberDbPerKm = 0.16;

/// Downlink model: Gaussian beam collected by a circular aperture, secant
/// air-mass atmospheric absorption, a fixed pointing loss and a fixed
/// receiver efficiency. Below `min_elevation_deg` the link is off.
struct FreeSpaceLinkParams {
  double divergence_half_angle_rad = 2e-6;
  double receiver_aperture_diameter_m = 1.0;
  double zenith_atmospheric_transmittance = 0.5;
  double pointing_loss_db = 1.0;
  double system_efficiency = 0.5;
  double min_elevation_deg = 20.0;

  void validate() const;
  bool operator==(const FreeSpaceLinkParams&) const = default;
};

/// 10^(-alpha L / 10).
double fiber_transmittance(const FiberLink& link);

/// Per-photon transmittance of a satellite-to-ground link. Zero below the
/// service elevation. Throws std::domain_error on non-finite parameters.
double freespace_transmittance(double elevation_deg, double altitude_km,
                               const FreeSpaceLinkParams& params,
                               double earth_radius_km = kEarthRadiusKm);

/// Probability that both photons of a pair arrive.
double pair_coincidence_probability(double eta_a, double eta_b);

struct AttenuationSample {
  double time_s = 0.0;
  std::array<std::optional<double>, 2> elevation_deg{};
  std::array<std::optional<double>, 2> slant_range_km{};
  std::array<double, 2> transmittance{};

  double coincidence_probability() const {
    return pair_coincidence_probability(transmittance[0], transmittance[1]);
  }
};

/// Link state of both stations at time t.
AttenuationSample sample_downlink(double t, const SatellitePassModel& pass,
                                  const FreeSpaceLinkParams& params);

/// Samples at window.start + k*step_s for every k that stays inside the
/// window (both endpoints included when the window length is a whole number
/// of steps).
std::vector<AttenuationSample> attenuation_profile(
    const SatellitePassModel& pass, const FreeSpaceLinkParams& params,
    double step_s, const std::optional<VisibilityWindow>& window);

}  // namespace qbackbone

#endif  // QBACKBONE_LINKBUDGET_HPP
