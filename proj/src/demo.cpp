#include "prosyn/demo.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "prosyn/rng.hpp"

namespace prosyn::demo {

namespace {

constexpr int kStates = 61;

double slot_target(int slot) {
  const double morning = (slot - 16.0) / 4.0;   // peak around 08:00
  const double evening = (slot - 38.0) / 5.0;   // peak around 19:00
  return 10.0 + 25.0 * std::exp(-morning * morning) +
         18.0 * std::exp(-evening * evening);
}

int day_of_year(Date date) {
  const std::chrono::year_month_day ymd{date};
  const Date jan1{std::chrono::sys_days{ymd.year() / std::chrono::January / 1}};
  return static_cast<int>((date - jan1).count()) + 1;
}

std::string format_value(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{})
    throw Error(ErrorKind::io, "number formatting failed");
  return std::string(buf, end);
}

}  // namespace

MarkovDayChain demand_chain() {
  MarkovDayChain chain;
  chain.n_states = kStates;
  chain.initial.assign(kStates, 0.0);
  const double t0 = slot_target(0);
  double sum = 0.0;
  for (int j = 0; j < kStates; ++j) {
    const double d = (j - t0) / 4.0;
    chain.initial[j] = std::exp(-0.5 * d * d);
    sum += chain.initial[j];
  }
  for (double& p : chain.initial) p /= sum;

  for (int k = 0; k < kSlotsPerDay; ++k) {
    auto& matrix = chain.transition[k];
    matrix.assign(static_cast<std::size_t>(kStates) * kStates, 0.0);
    const double target = slot_target(k);
    for (int i = 0; i < kStates; ++i) {
      // Partial mean reversion: next state centered between where the
      // customer is and where the day's rhythm points.
      const double center = 0.7 * i + 0.3 * target;
      double row_sum = 0.0;
      for (int j = 0; j < kStates; ++j) {
        const double d = (j - center) / 3.0;
        const double p = std::exp(-0.5 * d * d);
        matrix[static_cast<std::size_t>(i) * kStates + j] = p;
        row_sum += p;
      }
      for (int j = 0; j < kStates; ++j)
        matrix[static_cast<std::size_t>(i) * kStates + j] /= row_sum;
    }
  }
  return chain;
}

ClearnessMatrix clearness_matrix() {
  ClearnessMatrix m;
  for (int i = 0; i < kCiStates; ++i)
    for (int j = 0; j < kCiStates; ++j) {
      const double keep = (j - i) / 6.0;
      const double low = j / 8.0;
      const double high = (j - 100.0) / 8.0;
      const double mass = 40.0 * std::exp(-0.5 * keep * keep) +
                          15.0 * std::exp(-0.5 * low * low) +
                          15.0 * std::exp(-0.5 * high * high);
      const double count = std::floor(mass);
      if (count > 0) m.add(i, j, count);
    }
  return m;
}

SolarConfig site_config() {
  SolarConfig config;
  config.latitude_deg = -33.9;
  config.panel_tilt_deg = 20.0;
  config.panel_azimuth_deg = 0.0;  // north-facing (southern hemisphere)
  config.efficiency = 0.15;
  config.area_m2 = 10.0;
  config.irradiance_wm2 = 1367.0;
  config.day_of_year = 60;
  return config;
}

std::size_t write_meter_csv(const std::string& path,
                            const DatasetOptions& options) {
  if (options.customers < 1 || options.days < 1)
    throw Error(ErrorKind::config, "dataset needs customers >= 1 and days >= 1");
  const Date start = parse_date(options.start_date);
  const Calendar calendar;

  const auto profiles =
      generate_ground_truth(demand_chain(), options.customers, options.days,
                            options.seed, start, calendar);

  // PV size tiers: many small systems, some mid-sized, a few large, so the
  // per-customer peak readings form separable clusters.
  struct Tier {
    double peak_kwh;
    double weight;
  };
  const Tier tiers[] = {{0.64, 0.85}, {1.33, 0.11}, {4.40, 0.04}};

  RngStream root(options.seed);
  RngStream tier_rng = root.substream("pv-tiers");
  RngStream weather_rng = root.substream("weather");

  const SolarConfig base = site_config();
  std::vector<SolarConfig> configs(options.customers, base);
  for (int c = 0; c < options.customers; ++c) {
    const double u = tier_rng.uniform01();
    double acc = 0.0;
    double peak = tiers[0].peak_kwh;
    for (const auto& tier : tiers) {
      acc += tier.weight;
      if (u < acc) {
        peak = tier.peak_kwh;
        break;
      }
    }
    const double jitter = 1.0 + 0.04 * tier_rng.normal();
    configs[c].area_m2 = area_for_peak_reading(
        peak * std::max(0.5, jitter), base.efficiency, base.irradiance_wm2);
  }

  const CiChain ci_chain(clearness_matrix());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open for writing: " + path);
  out << "customer_id,timestamp,demand_kwh";
  if (options.with_generation) out << ",generation_kwh";
  out << '\n';

  std::size_t rows = 0;
  // Profiles arrive grouped by customer, days in order.
  for (const auto& p : profiles) {
    std::array<double, kSlotsPerDay> gen{};
    if (options.with_generation) {
      const int customer_index =
          static_cast<int>(std::stoul(p.customer_id.substr(1))) - 1;
      SolarConfig config = configs[customer_index];
      config.day_of_year = day_of_year(p.date);
      RngStream day_rng = weather_rng.substream(
          hash_label(p.customer_id) ^
          static_cast<std::uint64_t>(p.date.time_since_epoch().count()));
      const auto ci = sample_ci_path(config, ci_chain, {}, day_rng);
      gen = generation_from_ci(config, ci);
    }
    const std::string date = format_date(p.date);
    for (int k = 0; k < kSlotsPerDay; ++k) {
      char ts[24];
      std::snprintf(ts, sizeof ts, "%s %02d:%02d", date.c_str(), k / 2,
                    (k % 2) * 30);
      out << p.customer_id << ',' << ts << ',' << format_value(p.demand_kwh[k]);
      if (options.with_generation) out << ',' << format_value(gen[k]);
      out << '\n';
      ++rows;
    }
  }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
  return rows;
}

}  // namespace prosyn::demo
