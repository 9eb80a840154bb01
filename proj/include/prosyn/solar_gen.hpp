#pragma once

#include <array>
#include <vector>

#include "prosyn/demand_chain.hpp"
#include "prosyn/rng.hpp"
#include "prosyn/types.hpp"

namespace prosyn {

// Clearness-index states: 101 bins over [0, 1] with exact endpoints, so
// fully occluded and fully clear slots keep their own states.
inline constexpr int kCiStates = 101;

struct SolarConfig {
  double latitude_deg = 0.0;
  double panel_tilt_deg = 0.0;     // from horizontal
  double panel_azimuth_deg = 0.0;  // from north, clockwise; 180 faces south
  double efficiency = 0.15;        // module efficiency, (0, 1]
  double area_m2 = 10.0;
  double irradiance_wm2 = 1367.0;  // extraterrestrial irradiance constant
  int day_of_year = 1;             // 1..366

  void validate() const;
};

double declination_deg(int day_of_year);

// Geometric fraction of extraterrestrial irradiance incident on the tilted
// panel for a half-hour slot (evaluated at the slot midpoint, solar time).
// Zero when the sun is below the horizon or behind the panel plane.
double time_irradiance_factor(const SolarConfig& config, int slot);

// Clear-sky energy per slot: efficiency * area * TIF * G * 0.5h, in kWh.
double clear_sky_slot_kwh(const SolarConfig& config, int slot);
std::array<double, kSlotsPerDay> clear_sky_profile_kwh(
    const SolarConfig& config);

// Panel area sized so peak clear-sky power matches a peak half-hour meter
// reading (kWh per half hour -> average W is 2000x).
double area_for_peak_reading(double mean_peak_kwh, double efficiency,
                             double irradiance_wm2);

struct CiObservation {
  int slot = 0;   // 0..47
  int state = 0;  // 0..100
};

// Per-slot clearness states for the daylight slots of one observed day:
// state = round(100 * clamp(E / E_clear, 0, 1)). Night slots (TIF = 0) are
// omitted.
std::vector<CiObservation> extract_ci_series(
    const std::array<double, kSlotsPerDay>& generation_kwh,
    const SolarConfig& config);

// One transition matrix over CI states, shared by all daylight slots.
struct ClearnessMatrix {
  ClearnessMatrix() : counts(kCiStates * kCiStates, 0.0) {}

  std::vector<double> counts;  // row-major (from, to)

  double count(int from, int to) const;
  void add(int from, int to, double weight = 1.0);
  std::vector<double> row(int from) const;
  std::vector<double> destination_marginal() const;
  double total() const;
  ClearnessMatrix& merge(const ClearnessMatrix& other);
};

// Counts consecutive daylight pairs (adjacent slots) in each sequence.
ClearnessMatrix build_ci_matrix(
    const std::vector<std::vector<CiObservation>>& sequences);

// Sampling view with all rows smoothed eagerly; empty rows fall back to
// the smoothed destination marginal. Immutable after construction.
class CiChain {
 public:
  explicit CiChain(const ClearnessMatrix& matrix,
                   double bandwidth = kDefaultBandwidth);

  double bandwidth() const { return h_; }
  const ClearnessMatrix& matrix() const { return matrix_; }
  std::span<const double> row_cumulative(int from) const;
  std::span<const double> marginal_cumulative() const { return marginal_cum_; }

 private:
  ClearnessMatrix matrix_;
  double h_;
  std::vector<std::vector<double>> row_cum_;  // per from-state
  std::vector<double> marginal_cum_;
};

// How the first daylight state of a day is chosen. The chain itself has no
// natural first-slot distribution, so this is explicit: `uniform` draws
// any state with equal probability, `marginal` uses the smoothed
// destination marginal, `fixed` pins it (useful for forcing clear days).
enum class InitialCi { uniform, marginal, fixed };

struct CiSampleOptions {
  InitialCi initial = InitialCi::uniform;
  int fixed_state = kCiStates - 1;
};

// CI state per slot for one day; night slots hold -1.
std::array<int, kSlotsPerDay> sample_ci_path(const SolarConfig& config,
                                             const CiChain& chain,
                                             const CiSampleOptions& options,
                                             RngStream& rng);

// Deterministic synthesis from a given CI path: E_k = clear-sky_k * CI_k.
// Slots whose path state is negative (night) produce 0. Shared-weather
// cohorts reuse one path across prosumers with per-prosumer configs.
std::array<double, kSlotsPerDay> generation_from_ci(
    const SolarConfig& config, const std::array<int, kSlotsPerDay>& ci_path);

DailyProfile sample_generation_profile(const SolarConfig& config,
                                       const CiChain& chain, RngStream& rng,
                                       const CiSampleOptions& options = {});

struct NetResult {
  std::vector<std::array<double, kSlotsPerDay>> net;
  std::vector<std::size_t> equipped;  // indices that received generation
};

// Subtracts generation from demand for a random subset of prosumers of
// size round(penetration * population). The subset is a prefix of one
// seeded permutation, so sweeping penetration upward with the same stream
// only ever adds prosumers.
NetResult net_demand(
    const std::vector<std::array<double, kSlotsPerDay>>& demand,
    const std::vector<std::array<double, kSlotsPerDay>>& generation,
    double penetration, RngStream& rng);

}  // namespace prosyn
