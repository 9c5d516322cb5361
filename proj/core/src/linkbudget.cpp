#include "qbackbone/linkbudget.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbackbone {
namespace {

bool is_fraction(double x) { return x > 0.0 && x <= 1.0; }

}  // namespace

void FiberLink::validate() const {
  if (!(length_km >= 0.0) || !std::isfinite(length_km)) {
    throw std::domain_error("fiber length must be >= 0");
  }
  if (!(attenuation_db_per_km >= 0.0) || !std::isfinite(attenuation_db_per_km)) {
    throw std::domain_error("fiber attenuation must be >= 0");
  }
}

void FreeSpaceLinkParams::validate() const {
  if (!(divergence_half_angle_rad > 0.0) || !std::isfinite(divergence_half_angle_rad)) {
    throw std::domain_error("divergence must be positive");
  }
  if (!(receiver_aperture_diameter_m > 0.0) || !std::isfinite(receiver_aperture_diameter_m)) {
    throw std::domain_error("aperture must be positive");
  }
  if (!is_fraction(zenith_atmospheric_transmittance) || !is_fraction(system_efficiency)) {
    throw std::domain_error("transmittance and efficiency must lie in (0, 1]");
  }
  if (!(pointing_loss_db >= 0.0) || !std::isfinite(pointing_loss_db)) {
    throw std::domain_error("pointing loss must be >= 0 dB");
  }
  if (!(min_elevation_deg >= 0.0 && min_elevation_deg <= 90.0)) {
    throw std::domain_error("minimum elevation must lie in [0, 90]");
  }
}

double fiber_transmittance(const FiberLink& link) {
  link.validate();
  return std::pow(10.0, -link.attenuation_db_per_km * link.length_km / 10.0);
}

double freespace_transmittance(double elevation_deg, double altitude_km,
                               const FreeSpaceLinkParams& params, double earth_radius_km) {
  params.validate();
  if (!std::isfinite(elevation_deg) || !std::isfinite(altitude_km)) {
    throw std::domain_error("elevation and altitude must be finite");
  }
  if (elevation_deg < params.min_elevation_deg) return 0.0;

  const double range_m = slant_range_km(elevation_deg, altitude_km, earth_radius_km) * 1e3;
  const double beam_radius_m = params.divergence_half_angle_rad * range_m;
  const double d = params.receiver_aperture_diameter_m;
  const double geometric = -std::expm1(-(d * d) / (2.0 * beam_radius_m * beam_radius_m));

  const double sin_el = std::sin(elevation_deg * std::numbers::pi / 180.0);
  const double atmospheric = std::pow(params.zenith_atmospheric_transmittance, 1.0 / sin_el);
  const double pointing = std::pow(10.0, -params.pointing_loss_db / 10.0);

  return params.system_efficiency * pointing * atmospheric * geometric;
}

double pair_coincidence_probability(double eta_a, double eta_b) {
  if (!(eta_a >= 0.0 && eta_a <= 1.0) || !(eta_b >= 0.0 && eta_b <= 1.0)) {
    throw std::domain_error("transmittance must lie in [0, 1]");
  }
  return eta_a * eta_b;
}

AttenuationSample sample_downlink(double t, const SatellitePassModel& pass,
                                  const FreeSpaceLinkParams& params) {
  AttenuationSample s;
  s.time_s = t;
  for (Station st : {Station::egress, Station::ingress}) {
    const std::size_t i = index_of(st);
    s.elevation_deg[i] = elevation_at(t, pass, st);
    if (s.elevation_deg[i]) {
      s.slant_range_km[i] =
          slant_range_km(*s.elevation_deg[i], pass.altitude_km, pass.earth_radius_km);
      s.transmittance[i] = freespace_transmittance(*s.elevation_deg[i], pass.altitude_km,
                                                   params, pass.earth_radius_km);
    }
  }
  return s;
}

std::vector<AttenuationSample> attenuation_profile(
    const SatellitePassModel& pass, const FreeSpaceLinkParams& params, double step_s,
    const std::optional<VisibilityWindow>& window) {
  if (!(step_s > 0.0) || !std::isfinite(step_s)) {
    throw std::domain_error("profile step must be positive");
  }
  std::vector<AttenuationSample> out;
  if (!window) return out;

  // Tolerate rounding when the window is an exact multiple of the step.
  const double span = window->duration_s();
  const auto steps = static_cast<long long>(std::floor(span / step_s + 1e-9));
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (long long k = 0; k <= steps; ++k) {
    out.push_back(sample_downlink(window->start_s + static_cast<double>(k) * step_s, pass, params));
  }
  return out;
}

}  // namespace qbackbone
