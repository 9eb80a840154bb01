#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "prosyn/solar_gen.hpp"

using namespace prosyn;

namespace {

constexpr double kDeg = 0.017453292519943295;

// Independent formulation of the incidence geometry: build the sun vector
// and the panel normal in (south, east, up) coordinates and dot them. The
// library computes the same quantity through the expanded incidence
// cosine, so agreement is a cross-check, not a tautology.
double tif_by_vectors(const SolarConfig& c, int slot) {
  const double phi = c.latitude_deg * kDeg;
  const double delta = declination_deg(c.day_of_year) * kDeg;
  const double hour = (slot + 0.5) / 2.0;
  const double omega = (hour - 12.0) * 15.0 * kDeg;

  const double sun_up =
      std::cos(delta) * std::cos(omega) * std::cos(phi) +
      std::sin(delta) * std::sin(phi);
  if (sun_up <= 0.0) return 0.0;
  const double sun_south =
      std::cos(delta) * std::cos(omega) * std::sin(phi) -
      std::sin(delta) * std::cos(phi);
  const double sun_east = -std::cos(delta) * std::sin(omega);

  const double beta = c.panel_tilt_deg * kDeg;
  // Surface azimuth from south, west positive, so the normal's east
  // component carries a minus sign.
  const double gamma = (c.panel_azimuth_deg - 180.0) * kDeg;
  const double n_south = std::sin(beta) * std::cos(gamma);
  const double n_east = -std::sin(beta) * std::sin(gamma);
  const double n_up = std::cos(beta);

  const double dot =
      sun_south * n_south + sun_east * n_east + sun_up * n_up;
  return std::max(0.0, dot);
}

SolarConfig southern_site() {
  SolarConfig c;
  c.latitude_deg = -33.9;
  c.panel_tilt_deg = 20.0;
  c.panel_azimuth_deg = 0.0;  // faces north in the southern hemisphere
  c.efficiency = 0.15;
  c.area_m2 = 10.0;
  c.day_of_year = 60;
  return c;
}

}  // namespace

TEST_CASE("declination follows the seasonal sine") {
  CHECK(std::abs(declination_deg(81)) < 1e-9);
  CHECK(declination_deg(172) == doctest::Approx(23.449782846814));
  CHECK(declination_deg(355) == doctest::Approx(-23.449782846814));
  CHECK(declination_deg(1) == doctest::Approx(-23.011636727869));
  CHECK(declination_deg(60) == doctest::Approx(-8.293705065036));
}

TEST_CASE("the incidence factor matches an independent vector formulation") {
  std::vector<SolarConfig> configs;
  {
    SolarConfig c = southern_site();
    configs.push_back(c);
    c.day_of_year = 172;
    configs.push_back(c);
    c.latitude_deg = 51.5;  // northern mid-latitude
    c.panel_azimuth_deg = 180.0;
    c.day_of_year = 200;
    configs.push_back(c);
    c.panel_tilt_deg = 0.0;  // horizontal
    configs.push_back(c);
    c.panel_tilt_deg = 90.0;  // vertical, facing east
    c.panel_azimuth_deg = 90.0;
    configs.push_back(c);
    c.latitude_deg = 0.0;  // equator
    c.panel_azimuth_deg = 0.0;
    c.panel_tilt_deg = 15.0;
    c.day_of_year = 81;
    configs.push_back(c);
  }
  for (const auto& c : configs)
    for (int slot = 0; slot < kSlotsPerDay; ++slot)
      CHECK(time_irradiance_factor(c, slot) ==
            doctest::Approx(tif_by_vectors(c, slot)).epsilon(1e-12));
}

TEST_CASE("the factor is zero at night and positive at midday") {
  SolarConfig c = southern_site();
  CHECK(time_irradiance_factor(c, 0) == 0.0);
  CHECK(time_irradiance_factor(c, 47) == 0.0);
  CHECK(time_irradiance_factor(c, 24) > 0.5);
  // A horizontal panel sees exactly the zenith cosine.
  c.panel_tilt_deg = 0.0;
  const double phi = c.latitude_deg * kDeg;
  const double delta = declination_deg(c.day_of_year) * kDeg;
  const double omega = (24 + 0.5) / 2.0 * 15.0 * kDeg - 180.0 * kDeg;
  const double cos_zenith = std::cos(phi) * std::cos(delta) *
                                std::cos(omega) +
                            std::sin(phi) * std::sin(delta);
  CHECK(time_irradiance_factor(c, 24) == doctest::Approx(cos_zenith));
}

TEST_CASE("config validation rejects out-of-range geometry") {
  SolarConfig c = southern_site();
  c.validate();
  c.panel_tilt_deg = 95.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = southern_site();
  c.efficiency = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = southern_site();
  c.day_of_year = 367;
  CHECK_THROWS_AS(c.validate(), Error);
  c = southern_site();
  c.latitude_deg = 91.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("clear-sky energy is the electrical identity over the factor") {
  SolarConfig c = southern_site();
  auto profile = clear_sky_profile_kwh(c);
  for (int slot = 0; slot < kSlotsPerDay; ++slot) {
    double expected = c.efficiency * c.area_m2 *
                      time_irradiance_factor(c, slot) * c.irradiance_wm2 *
                      0.5 / 1000.0;
    CHECK(profile[slot] == doctest::Approx(expected));
    CHECK(profile[slot] == doctest::Approx(clear_sky_slot_kwh(c, slot)));
  }
}

TEST_CASE("panel sizing inverts the peak reading") {
  const double peak_kwh = 1.33;
  const double area = area_for_peak_reading(peak_kwh, 0.15, 1367.0);
  CHECK(area == doctest::Approx(2000.0 * 1.33 / (0.15 * 1367.0)));
  SolarConfig c = southern_site();
  c.area_m2 = area;
  // At TIF = 1 the slot energy would be exactly the peak reading.
  CHECK(c.efficiency * c.area_m2 * 1.0 * c.irradiance_wm2 * 0.5 / 1000.0 ==
        doctest::Approx(peak_kwh));
}

TEST_CASE("clearness extraction maps ratios to states and skips night") {
  SolarConfig c = southern_site();
  auto clear = clear_sky_profile_kwh(c);
  std::array<double, kSlotsPerDay> gen{};
  for (int k = 0; k < kSlotsPerDay; ++k) gen[k] = 0.5 * clear[k];
  std::vector<CiObservation> series = extract_ci_series(gen, c);
  CHECK(series.size() > 10);
  for (const auto& obs : series) {
    CHECK(obs.state == 50);
    CHECK(clear[obs.slot] > 0.0);
  }

  // Readings above clear sky clamp to the top state.
  for (int k = 0; k < kSlotsPerDay; ++k) gen[k] = 2.0 * clear[k];
  for (const auto& obs : extract_ci_series(gen, c)) CHECK(obs.state == 100);
}

TEST_CASE("matrix building counts only adjacent daylight pairs") {
  std::vector<std::vector<CiObservation>> sequences;
  sequences.push_back({{10, 40}, {11, 50}, {13, 60}, {14, 60}});
  ClearnessMatrix m = build_ci_matrix(sequences);
  CHECK(m.count(40, 50) == doctest::Approx(1.0));
  CHECK(m.count(50, 60) == doctest::Approx(0.0));  // slot gap 11 -> 13
  CHECK(m.count(60, 60) == doctest::Approx(1.0));
  CHECK(m.total() == doctest::Approx(2.0));

  ClearnessMatrix other;
  other.add(40, 50, 3.0);
  m.merge(other);
  CHECK(m.count(40, 50) == doctest::Approx(4.0));
}

TEST_CASE("clearness chain rows are cumulative distributions") {
  ClearnessMatrix m;
  m.add(50, 52, 5.0);
  m.add(50, 48, 5.0);
  m.add(80, 80, 2.0);
  CiChain chain(m, 2.0);
  auto row = chain.row_cumulative(50);
  REQUIRE(row.size() == kCiStates);
  CHECK(row.back() == doctest::Approx(1.0));
  for (std::size_t j = 1; j < row.size(); ++j) CHECK(row[j] >= row[j - 1]);
  // Unobserved rows fall back to the smoothed marginal.
  auto fallback = chain.row_cumulative(10);
  CHECK(fallback.back() == doctest::Approx(1.0));

  ClearnessMatrix empty;
  CHECK_THROWS_AS(CiChain(empty, 2.0), Error);
}

TEST_CASE("sampled clearness paths mark night and honor the initial mode") {
  SolarConfig c = southern_site();
  ClearnessMatrix m;
  m.add(50, 50, 10.0);
  CiChain chain(m, 1.0);
  RngStream rng(301);
  CiSampleOptions options;
  options.initial = InitialCi::fixed;
  options.fixed_state = 100;
  auto path = sample_ci_path(c, chain, options, rng);
  bool seen_first = false;
  for (int k = 0; k < kSlotsPerDay; ++k) {
    if (time_irradiance_factor(c, k) <= 0.0) {
      CHECK(path[k] == -1);
    } else {
      if (!seen_first) {
        CHECK(path[k] == 100);  // pinned first daylight state
        seen_first = true;
      }
      CHECK(path[k] >= 0);
      CHECK(path[k] <= 100);
    }
  }
  CHECK(seen_first);
}

TEST_CASE("generation from a forced clear path is exactly clear sky") {
  SolarConfig c = southern_site();
  std::array<int, kSlotsPerDay> path;
  for (int k = 0; k < kSlotsPerDay; ++k)
    path[k] = time_irradiance_factor(c, k) > 0.0 ? 100 : -1;
  auto gen = generation_from_ci(c, path);
  auto clear = clear_sky_profile_kwh(c);
  for (int k = 0; k < kSlotsPerDay; ++k)
    CHECK(gen[k] == doctest::Approx(clear[k]).epsilon(1e-12));
}

TEST_CASE("clearness states round-trip through generation") {
  SolarConfig c = southern_site();
  RngStream rng(309);
  std::array<int, kSlotsPerDay> path;
  for (int k = 0; k < kSlotsPerDay; ++k) {
    path[k] = time_irradiance_factor(c, k) > 0.0
                  ? static_cast<int>(rng.uniform_below(101))
                  : -1;
  }
  auto gen = generation_from_ci(c, path);
  std::vector<CiObservation> series = extract_ci_series(gen, c);
  for (const auto& obs : series) CHECK(obs.state == path[obs.slot]);
}

TEST_CASE("net demand subtracts for a nested random subset") {
  const std::size_t n = 40;
  std::vector<std::array<double, kSlotsPerDay>> demand(n);
  std::vector<std::array<double, kSlotsPerDay>> gen(n);
  for (std::size_t i = 0; i < n; ++i) {
    demand[i].fill(1.0 + static_cast<double>(i) * 0.01);
    gen[i].fill(0.25);
  }

  RngStream r1(401), r2(401);
  NetResult half = net_demand(demand, gen, 0.5, r1);
  NetResult most = net_demand(demand, gen, 0.8, r2);
  CHECK(half.equipped.size() == 20);
  CHECK(most.equipped.size() == 32);

  // Same stream seed: the smaller subset is a prefix of the larger.
  std::set<std::size_t> small(half.equipped.begin(), half.equipped.end());
  std::set<std::size_t> large(most.equipped.begin(), most.equipped.end());
  for (std::size_t i : small) CHECK(large.count(i) == 1);

  for (std::size_t i = 0; i < n; ++i) {
    double expect = demand[i][7] - (small.count(i) ? 0.25 : 0.0);
    CHECK(half.net[i][7] == doctest::Approx(expect));
  }

  RngStream r3(401);
  NetResult none = net_demand(demand, gen, 0.0, r3);
  CHECK(none.equipped.empty());
  RngStream r4(401);
  NetResult all = net_demand(demand, gen, 1.0, r4);
  CHECK(all.equipped.size() == n);

  RngStream r5(401);
  CHECK_THROWS_AS(net_demand(demand, gen, 1.5, r5), Error);
  std::vector<std::array<double, kSlotsPerDay>> short_gen(n - 1);
  RngStream r6(401);
  CHECK_THROWS_AS(net_demand(demand, short_gen, 0.5, r6), Error);
}
