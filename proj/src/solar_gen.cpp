#include "prosyn/solar_gen.hpp"

#include <algorithm>
#include <cmath>

namespace prosyn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rad(double deg) { return deg * kPi / 180.0; }

void check_ci_state(int s) {
  if (s < 0 || s >= kCiStates)
    throw Error(ErrorKind::domain, "clearness state out of range");
}

}  // namespace

void SolarConfig::validate() const {
  if (!(efficiency > 0) || efficiency > 1)
    throw Error(ErrorKind::config, "efficiency must be in (0, 1]");
  if (!(area_m2 > 0)) throw Error(ErrorKind::config, "area must be positive");
  if (std::abs(latitude_deg) > 90)
    throw Error(ErrorKind::config, "latitude out of range");
  if (!(irradiance_wm2 > 0))
    throw Error(ErrorKind::config, "irradiance must be positive");
  if (day_of_year < 1 || day_of_year > 366)
    throw Error(ErrorKind::config, "day of year out of range");
  if (panel_tilt_deg < 0 || panel_tilt_deg > 90)
    throw Error(ErrorKind::config, "panel tilt out of range");
}

double declination_deg(int day_of_year) {
  return 23.45 * std::sin(rad(360.0 * (284.0 + day_of_year) / 365.0));
}

double time_irradiance_factor(const SolarConfig& config, int slot) {
  if (slot < 0 || slot >= kSlotsPerDay)
    throw Error(ErrorKind::domain, "slot index out of range");
  const double delta = rad(declination_deg(config.day_of_year));
  const double phi = rad(config.latitude_deg);
  const double beta = rad(config.panel_tilt_deg);
  // Surface azimuth measured from south (west positive), as the
  // tilted-plane incidence formula expects.
  const double gamma = rad(config.panel_azimuth_deg - 180.0);
  const double hour = (slot + 0.5) / 2.0;  // slot midpoint, solar time
  const double omega = rad(15.0 * (hour - 12.0));

  const double cos_zenith = std::sin(phi) * std::sin(delta) +
                            std::cos(phi) * std::cos(delta) * std::cos(omega);
  if (cos_zenith <= 0) return 0.0;  // sun below horizon

  const double cos_incidence =
      std::sin(delta) * std::sin(phi) * std::cos(beta) -
      std::sin(delta) * std::cos(phi) * std::sin(beta) * std::cos(gamma) +
      std::cos(delta) * std::cos(phi) * std::cos(beta) * std::cos(omega) +
      std::cos(delta) * std::sin(phi) * std::sin(beta) * std::cos(gamma) *
          std::cos(omega) +
      std::cos(delta) * std::sin(beta) * std::sin(gamma) * std::sin(omega);
  return std::max(0.0, cos_incidence);
}

double clear_sky_slot_kwh(const SolarConfig& config, int slot) {
  // efficiency * area[m^2] * TIF * G[W/m^2] gives watts; half an hour of
  // that, over 1000, gives kWh.
  return config.efficiency * config.area_m2 *
         time_irradiance_factor(config, slot) * config.irradiance_wm2 * 0.5 /
         1000.0;
}

std::array<double, kSlotsPerDay> clear_sky_profile_kwh(
    const SolarConfig& config) {
  config.validate();
  std::array<double, kSlotsPerDay> out;
  for (int k = 0; k < kSlotsPerDay; ++k) out[k] = clear_sky_slot_kwh(config, k);
  return out;
}

double area_for_peak_reading(double mean_peak_kwh, double efficiency,
                             double irradiance_wm2) {
  if (!(mean_peak_kwh > 0))
    throw Error(ErrorKind::domain, "peak reading must be positive");
  if (!(efficiency > 0) || !(irradiance_wm2 > 0))
    throw Error(ErrorKind::config, "efficiency and irradiance must be positive");
  // kWh per half hour -> average W is 2000x; size the panel so peak
  // clear-sky power (TIF = 1) reproduces it.
  return 2000.0 * mean_peak_kwh / (efficiency * irradiance_wm2);
}

std::vector<CiObservation> extract_ci_series(
    const std::array<double, kSlotsPerDay>& generation_kwh,
    const SolarConfig& config) {
  config.validate();
  std::vector<CiObservation> out;
  for (int k = 0; k < kSlotsPerDay; ++k) {
    const double clear = clear_sky_slot_kwh(config, k);
    if (clear <= 0) continue;  // night, or sun behind the panel plane
    const double ci =
        std::clamp(generation_kwh[k] / clear, 0.0, 1.0);
    out.push_back(
        {k, static_cast<int>(std::lround(ci * (kCiStates - 1)))});
  }
  return out;
}

double ClearnessMatrix::count(int from, int to) const {
  check_ci_state(from);
  check_ci_state(to);
  return counts[static_cast<std::size_t>(from) * kCiStates + to];
}

void ClearnessMatrix::add(int from, int to, double weight) {
  check_ci_state(from);
  check_ci_state(to);
  if (weight < 0) throw Error(ErrorKind::domain, "negative count weight");
  counts[static_cast<std::size_t>(from) * kCiStates + to] += weight;
}

std::vector<double> ClearnessMatrix::row(int from) const {
  check_ci_state(from);
  const auto first = counts.begin() + static_cast<std::ptrdiff_t>(from) * kCiStates;
  return std::vector<double>(first, first + kCiStates);
}

std::vector<double> ClearnessMatrix::destination_marginal() const {
  std::vector<double> col(kCiStates, 0.0);
  for (int i = 0; i < kCiStates; ++i)
    for (int j = 0; j < kCiStates; ++j)
      col[j] += counts[static_cast<std::size_t>(i) * kCiStates + j];
  return col;
}

double ClearnessMatrix::total() const {
  double t = 0.0;
  for (double c : counts) t += c;
  return t;
}

ClearnessMatrix& ClearnessMatrix::merge(const ClearnessMatrix& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  return *this;
}

ClearnessMatrix build_ci_matrix(
    const std::vector<std::vector<CiObservation>>& sequences) {
  ClearnessMatrix m;
  for (const auto& seq : sequences)
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
      if (seq[i + 1].slot == seq[i].slot + 1)
        m.add(seq[i].state, seq[i + 1].state);
  return m;
}

CiChain::CiChain(const ClearnessMatrix& matrix, double bandwidth)
    : matrix_(matrix), h_(bandwidth) {
  if (!(h_ > 0)) throw Error(ErrorKind::config, "bandwidth must be positive");
  if (matrix_.total() <= 0)
    throw Error(ErrorKind::domain, "clearness matrix has no transitions");
  const auto marginal = kde_row(matrix_.destination_marginal(), h_).p;
  marginal_cum_.assign(marginal.begin(), marginal.end());
  for (int j = 1; j < kCiStates; ++j) marginal_cum_[j] += marginal_cum_[j - 1];

  row_cum_.resize(kCiStates);
  for (int i = 0; i < kCiStates; ++i) {
    const auto raw = matrix_.row(i);
    bool any = false;
    for (double c : raw)
      if (c > 0) any = true;
    if (!any) continue;  // row_cumulative falls back to the marginal
    auto p = kde_row(raw, h_).p;
    for (int j = 1; j < kCiStates; ++j) p[j] += p[j - 1];
    row_cum_[i] = std::move(p);
  }
}

std::span<const double> CiChain::row_cumulative(int from) const {
  check_ci_state(from);
  if (row_cum_[from].empty()) return marginal_cum_;
  return row_cum_[from];
}

std::array<int, kSlotsPerDay> sample_ci_path(const SolarConfig& config,
                                             const CiChain& chain,
                                             const CiSampleOptions& options,
                                             RngStream& rng) {
  config.validate();
  std::array<int, kSlotsPerDay> path;
  path.fill(-1);
  int state = -1;
  for (int k = 0; k < kSlotsPerDay; ++k) {
    if (time_irradiance_factor(config, k) <= 0) continue;
    if (state < 0) {
      switch (options.initial) {
        case InitialCi::uniform:
          state = static_cast<int>(rng.uniform_below(kCiStates));
          break;
        case InitialCi::marginal:
          state = static_cast<int>(
              categorical_draw(chain.marginal_cumulative(), rng));
          break;
        case InitialCi::fixed:
          check_ci_state(options.fixed_state);
          state = options.fixed_state;
          break;
      }
    } else {
      state =
          static_cast<int>(categorical_draw(chain.row_cumulative(state), rng));
    }
    path[k] = state;
  }
  return path;
}

std::array<double, kSlotsPerDay> generation_from_ci(
    const SolarConfig& config, const std::array<int, kSlotsPerDay>& ci_path) {
  config.validate();
  std::array<double, kSlotsPerDay> out{};
  for (int k = 0; k < kSlotsPerDay; ++k) {
    if (ci_path[k] < 0) continue;
    check_ci_state(ci_path[k]);
    out[k] = clear_sky_slot_kwh(config, k) *
             (static_cast<double>(ci_path[k]) / (kCiStates - 1));
  }
  return out;
}

DailyProfile sample_generation_profile(const SolarConfig& config,
                                       const CiChain& chain, RngStream& rng,
                                       const CiSampleOptions& options) {
  const auto path = sample_ci_path(config, chain, options, rng);
  DailyProfile p;
  p.demand_kwh.fill(0.0);
  p.generation_kwh = generation_from_ci(config, path);
  return p;
}

NetResult net_demand(
    const std::vector<std::array<double, kSlotsPerDay>>& demand,
    const std::vector<std::array<double, kSlotsPerDay>>& generation,
    double penetration, RngStream& rng) {
  if (!(penetration >= 0) || penetration > 1)
    throw Error(ErrorKind::domain, "penetration must be in [0, 1]");
  if (generation.size() != demand.size())
    throw Error(ErrorKind::domain,
                "need one generation profile per demand profile");

  const auto n = demand.size();
  const auto m = static_cast<std::size_t>(
      std::llround(penetration * static_cast<double>(n)));
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);

  NetResult result;
  result.net = demand;
  result.equipped.assign(perm.begin(), perm.begin() + m);
  std::sort(result.equipped.begin(), result.equipped.end());
  for (std::size_t idx : result.equipped)
    for (int k = 0; k < kSlotsPerDay; ++k)
      result.net[idx][k] -= generation[idx][k];
  return result;
}

}  // namespace prosyn
