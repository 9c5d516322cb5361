#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "qbackbone/linkbudget.hpp"
#include "qbackbone/scenario.hpp"

using namespace qbackbone;

TEST_CASE("fiber transmittance") {
  CHECK(fiber_transmittance({0.0, 0.2}) == 1.0);
  CHECK(fiber_transmittance({5.0, 0.2}) == doctest::Approx(0.79433).epsilon(1e-5 / 0.79433));
  CHECK(fiber_transmittance({75.0, 0.16}) == doctest::Approx(0.06310).epsilon(1e-5 / 0.0631));
  CHECK_THROWS_AS(fiber_transmittance({-1.0, 0.2}), std::domain_error);
  CHECK_THROWS_AS(fiber_transmittance({1.0, -0.2}), std::domain_error);
}

TEST_CASE("fiber transmittance is multiplicative in length") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> len(0.0, 200.0), att(0.0, 0.5);
  for (int i = 0; i < 500; ++i) {
    const double a = att(rng), l1 = len(rng), l2 = len(rng);
    const double joined = fiber_transmittance({l1 + l2, a});
    const double split = fiber_transmittance({l1, a}) * fiber_transmittance({l2, a});
    CHECK(joined == doctest::Approx(split).epsilon(1e-12));
  }
}

TEST_CASE("free-space transmittance values") {
  const FreeSpaceLinkParams defaults;
  CHECK(freespace_transmittance(19.99, 500.0, defaults) == 0.0);
  CHECK(freespace_transmittance(5.0, 1200.0, defaults) == 0.0);
  // w = 1 m at 500 km: (1 - e^-0.5) * 0.5 * 10^-0.1 * 0.5
  CHECK(freespace_transmittance(90.0, 500.0, defaults) == doctest::Approx(0.0781).epsilon(1e-3 / 0.0781));
  CHECK(freespace_transmittance(76.0, 805.0, defaults) == doctest::Approx(0.0325).epsilon(1e-3 / 0.0325));
  const double eta = freespace_transmittance(90.0, 500.0, defaults);
  CHECK(10.0 * std::log10(eta) == doctest::Approx(-11.07).epsilon(0.01 / 11.07));
}

TEST_CASE("free-space transmittance rejects non-finite parameters") {
  FreeSpaceLinkParams p;
  p.divergence_half_angle_rad = NAN;
  CHECK_THROWS_AS(freespace_transmittance(45.0, 500.0, p), std::domain_error);
  CHECK_THROWS_AS(freespace_transmittance(NAN, 500.0, FreeSpaceLinkParams{}), std::domain_error);
  p = FreeSpaceLinkParams{};
  p.system_efficiency = 1.5;
  CHECK_THROWS_AS(freespace_transmittance(45.0, 500.0, p), std::domain_error);
}

TEST_CASE("free-space transmittance is monotone in elevation and altitude") {
  const FreeSpaceLinkParams p;
  for (double h : {400.0, 500.0, 800.0, 1200.0}) {
    double prev = 0.0;
    for (double e = 0.0; e <= 90.0; e += 0.25) {
      const double eta = freespace_transmittance(e, h, p);
      CHECK(eta >= prev);
      CHECK(eta < 1.0);
      prev = eta;
    }
  }
  for (double e : {20.0, 45.0, 75.0, 90.0}) {
    double prev = 1.0;
    for (double h = 300.0; h <= 1500.0; h += 25.0) {
      const double eta = freespace_transmittance(e, h, p);
      CHECK(eta <= prev);
      prev = eta;
    }
  }
}

TEST_CASE("pair coincidence probability") {
  CHECK(pair_coincidence_probability(1.0, 1.0) == 1.0);
  CHECK(pair_coincidence_probability(0.0316, 0.0316) == doctest::Approx(9.99e-4).epsilon(1e-6 / 9.99e-4));
  CHECK(pair_coincidence_probability(0.5, 0.0) == 0.0);
  CHECK_THROWS_AS(pair_coincidence_probability(1.1, 0.5), std::domain_error);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(pair_coincidence_probability(a, b) <= std::min(a, b));
  }
}

TEST_CASE("attenuation profile sampling") {
  const auto micius = *preset_source("Micius");
  const auto& sat = *micius.satellite();

  SUBCASE("256 s window at 2 s steps has 129 samples") {
    const auto prof = attenuation_profile(sat.pass, sat.freespace, 2.0, VisibilityWindow{0.0, 256.0});
    CHECK(prof.size() == 129);
    CHECK(prof.front().time_s == 0.0);
    CHECK(prof.back().time_s == 256.0);
  }
  SUBCASE("peak sample sees the configured elevation") {
    const VisibilityWindow w{kMiciusPeakS - 10.0, kMiciusPeakS + 10.0};
    const auto prof = attenuation_profile(sat.pass, sat.freespace, 2.0, w);
    REQUIRE(prof.size() == 11);
    CHECK(*prof[5].elevation_deg[0] == doctest::Approx(83.0));
    CHECK(*prof[5].elevation_deg[1] == doctest::Approx(75.0));
  }
  SUBCASE("samples are consistent with geometry and the link model") {
    const auto prof = attenuation_profile(sat.pass, sat.freespace, 2.0,
                                          visibility_window(sat.pass, 20.0));
    REQUIRE_FALSE(prof.empty());
    for (const auto& s : prof) {
      for (std::size_t i = 0; i < 2; ++i) {
        REQUIRE(s.elevation_deg[i]);
        CHECK(*s.slant_range_km[i] == doctest::Approx(slant_range_km(*s.elevation_deg[i], 474.0)));
        CHECK(s.transmittance[i] ==
              doctest::Approx(freespace_transmittance(*s.elevation_deg[i], 474.0, sat.freespace)));
      }
      CHECK(s.coincidence_probability() == doctest::Approx(s.transmittance[0] * s.transmittance[1]));
    }
  }
  SUBCASE("outside visibility everything is dark") {
    const auto prof = attenuation_profile(sat.pass, sat.freespace, 2.0, VisibilityWindow{2000.0, 2100.0});
    for (const auto& s : prof) {
      CHECK(s.transmittance[0] == 0.0);
      CHECK(s.transmittance[1] == 0.0);
    }
  }
  SUBCASE("empty window") {
    CHECK(attenuation_profile(sat.pass, sat.freespace, 2.0, std::nullopt).empty());
    CHECK_THROWS_AS(attenuation_profile(sat.pass, sat.freespace, 0.0, VisibilityWindow{}), std::domain_error);
  }
}

TEST_CASE("transmittance is zero exactly below the service elevation") {
  const auto src = *preset_source("Starlink-2007");
  for (double t = 0.0; t < 600.0; t += 0.5) {
    const auto s = sample_downlink(t, src.satellite()->pass, src.satellite()->freespace);
    for (std::size_t i = 0; i < 2; ++i) {
      const bool above = s.elevation_deg[i] && *s.elevation_deg[i] >= 20.0;
      CHECK((s.transmittance[i] > 0.0) == above);
    }
  }
}

TEST_CASE("peak coincidence ordering against a 150 km dark-fiber split") {
  const double dark = preset_source("fiber-dark")->coincidence_probability(0.0);
  CHECK(dark == doctest::Approx(std::pow(10.0, -2.4)));
  CHECK(preset_source("Micius")->coincidence_probability(kMiciusPeakS) > dark);
  CHECK(preset_source("Starlink-2007")->coincidence_probability(kStarlinkPeakS) > dark);
  CHECK(preset_source("Iridium-126")->coincidence_probability(kIridiumPeakS) < dark);
}
