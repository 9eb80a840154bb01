#include "prosyn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>

#include "prosyn/demand_chain.hpp"
#include "prosyn/feature_assignment.hpp"
#include "prosyn/io.hpp"
#include "prosyn/rng.hpp"

namespace prosyn {

namespace {

namespace fs = std::filesystem;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory: " + dir);
}

std::vector<std::string> make_ids(const std::string& prefix, int n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  char buf[32];
  for (int i = 1; i <= n; ++i) {
    std::snprintf(buf, sizeof buf, "%s%04d", prefix.c_str(), i);
    ids.emplace_back(buf);
  }
  return ids;
}

}  // namespace

int day_of_year(Date date) {
  const std::chrono::year_month_day ymd{date};
  const Date jan1{std::chrono::sys_days{ymd.year() / std::chrono::January / 1}};
  return static_cast<int>((date - jan1).count()) + 1;
}

FeatureExtraction extract_feature(const std::vector<DailyProfile>& profiles,
                                  const std::string& kind) {
  enum class Kind { peak_generation, peak_demand, mean_demand } k;
  if (kind == "peak_generation")
    k = Kind::peak_generation;
  else if (kind == "peak_demand")
    k = Kind::peak_demand;
  else if (kind == "mean_demand")
    k = Kind::mean_demand;
  else
    throw Error(ErrorKind::config, "unknown feature kind: " + kind);

  struct Acc {
    double peak = 0.0;
    double sum = 0.0;
    std::size_t slots = 0;
    bool has_gen = false;
  };
  std::map<std::string, Acc> by_customer;
  for (const auto& p : profiles) {
    auto& acc = by_customer[p.customer_id];
    for (int s = 0; s < kSlotsPerDay; ++s) {
      acc.sum += p.demand_kwh[s];
      acc.peak = std::max(acc.peak, k == Kind::peak_generation
                                        ? (p.generation_kwh
                                               ? (*p.generation_kwh)[s]
                                               : 0.0)
                                        : p.demand_kwh[s]);
    }
    acc.slots += kSlotsPerDay;
    if (p.generation_kwh) acc.has_gen = true;
  }

  FeatureExtraction out;
  for (const auto& [id, acc] : by_customer) {
    if (k == Kind::peak_generation && !acc.has_gen) {
      ++out.skipped;
      continue;
    }
    out.customer_ids.push_back(id);
    switch (k) {
      case Kind::peak_generation:
      case Kind::peak_demand:
        out.values.push_back(acc.peak);
        break;
      case Kind::mean_demand:
        out.values.push_back(acc.sum / static_cast<double>(acc.slots));
        break;
    }
  }
  return out;
}

IngestSummary run_ingest(const std::string& csv_path,
                         const IngestRunOptions& options,
                         const std::string& out_store_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open for reading: " + csv_path);
  const auto result = parse_meter_csv(in, options.schema);

  IngestSummary summary;
  summary.rows_total = result.rows_total;
  summary.rows_rejected = result.rejected.size();
  summary.customers = result.traces.size();

  std::vector<DailyProfile> profiles;
  for (const auto& trace : result.traces) {
    auto split = split_days(trace, options.calendar);
    summary.dropped_days += split.dropped_days;
    summary.duplicate_readings += split.duplicate_readings;
    summary.partial_generation_days += split.partial_generation_days;
    for (auto& p : split.profiles) profiles.push_back(std::move(p));
  }
  summary.profiles = profiles.size();
  io::write_profile_store(out_store_path, profiles);
  return summary;
}

ClusterModel run_cluster(const std::string& store_path,
                         const ClusterRunOptions& options,
                         const std::string& out_model_path) {
  const auto profiles = io::read_profile_store(store_path);
  const auto feature = extract_feature(profiles, options.feature);
  if (feature.values.empty())
    throw Error(ErrorKind::domain,
                "no customers with usable '" + options.feature + "' values");

  io::ClusterFitMeta meta;
  ClusterModel model;
  if (options.method == "map_dp") {
    MapDpPrior prior;
    if (options.prior_from_data) {
      double mean = 0.0;
      for (double v : feature.values) mean += v;
      mean /= static_cast<double>(feature.values.size());
      double var = 0.0;
      for (double v : feature.values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(feature.values.size());
      prior.prior_mean = mean;
      prior.prior_variance = std::max(var, 1e-12);
    } else {
      prior.prior_mean = options.prior_mean;
      prior.prior_variance = options.prior_variance;
    }
    prior.new_cluster_variance = options.new_cluster_variance;
    prior.concentration = options.concentration;
    model = map_dp(feature.values, prior, options.max_iter);
    meta = {"map_dp", prior.prior_mean, prior.prior_variance,
            prior.new_cluster_variance > 0 ? prior.new_cluster_variance
                                           : prior.prior_variance / 10.0,
            prior.concentration};
  } else if (options.method == "kmeans") {
    if (options.k < 1)
      throw Error(ErrorKind::config, "kmeans needs k >= 1");
    std::vector<double> inits = options.init_means;
    if (inits.empty()) {
      // Quantile seeding: evenly spaced order statistics.
      std::vector<double> sorted = feature.values;
      std::sort(sorted.begin(), sorted.end());
      for (int c = 0; c < options.k; ++c) {
        const double q = (c + 0.5) / options.k;
        inits.push_back(
            sorted[static_cast<std::size_t>(q * (sorted.size() - 1))]);
      }
    }
    model = kmeans(feature.values, options.k, inits, options.max_iter);
    meta.method = "kmeans";
  } else {
    throw Error(ErrorKind::config, "unknown cluster method: " + options.method);
  }
  io::write_cluster_model(out_model_path, model, meta);
  return model;
}

AssignSummary run_assign(const std::string& cluster_model_path,
                         const AssignRunOptions& options,
                         const std::string& out_assignments_path,
                         const std::string& out_dirichlet_path) {
  if (options.population == 0)
    throw Error(ErrorKind::config, "population must be positive");
  const auto model = io::read_cluster_model(cluster_model_path);

  DirichletFeatureModel dirichlet;
  dirichlet.feature_id = options.feature_id;
  dirichlet.alpha = cluster_counts(model);
  for (double& a : dirichlet.alpha)
    if (a == 0.0) a = kAlphaFloor;

  RngStream root(options.seed);
  RngStream q_rng = root.substream("dirichlet");
  RngStream count_rng = root.substream("counts");
  RngStream assign_rng = root.substream("assign");

  AssignSummary summary;
  summary.alpha = dirichlet.alpha;
  summary.probabilities = dirichlet_sample(dirichlet, q_rng);
  summary.counts =
      categorical_counts(summary.probabilities, options.population, count_rng);

  const auto ids =
      make_ids(options.id_prefix, static_cast<int>(options.population));
  const auto assignments = assign_features(
      {{options.feature_id, summary.counts}}, ids, assign_rng);

  io::write_assignments(out_assignments_path, assignments);
  io::write_dirichlet_models(out_dirichlet_path, {dirichlet});
  return summary;
}

BuildSummary run_build_demand(const std::string& store_path,
                              const BuildDemandOptions& options,
                              const std::string& out_tensor_path) {
  const auto profiles = io::read_profile_store(store_path);
  const auto tensor = build_tensor(profiles, options.day_type, options.n_max);
  if (tensor.transition_count() == 0)
    throw Error(ErrorKind::domain, "no profiles of the requested day type");
  io::write_tensor(out_tensor_path, tensor, io::file_hash_hex(store_path));
  BuildSummary summary;
  summary.entries = tensor.transition_count();
  for (int k = 0; k < kSlotsPerDay; ++k)
    summary.transitions += tensor.slot_total(k);
  summary.population = tensor.source_population;
  return summary;
}

BuildSummary run_build_solar(const std::string& store_path,
                             const BuildSolarOptions& options,
                             const std::string& out_matrix_path) {
  const auto profiles = io::read_profile_store(store_path);
  std::vector<std::vector<CiObservation>> sequences;
  std::set<std::string> customers;
  for (const auto& p : profiles) {
    if (!p.generation_kwh) continue;
    SolarConfig config = options.solar;
    config.day_of_year = day_of_year(p.date);
    auto seq = extract_ci_series(*p.generation_kwh, config);
    if (!seq.empty()) {
      customers.insert(p.customer_id);
      sequences.push_back(std::move(seq));
    }
  }
  const auto matrix = build_ci_matrix(sequences);
  if (matrix.total() <= 0)
    throw Error(ErrorKind::domain,
                "no daylight generation transitions in " + store_path);
  io::write_ci_matrix(out_matrix_path, matrix, io::file_hash_hex(store_path));
  BuildSummary summary;
  summary.transitions = matrix.total();
  for (double c : matrix.counts)
    if (c != 0.0) ++summary.entries;
  summary.population = customers.size();
  return summary;
}

SynthRunSummary run_synth(const SynthRunOptions& options) {
  if (options.days < 1)
    throw Error(ErrorKind::config, "days must be >= 1");
  if (options.out_dir.empty())
    throw Error(ErrorKind::config, "output directory required");
  for (double p : options.penetrations)
    if (!(p >= 0) || p > 1)
      throw Error(ErrorKind::config, "penetration must be in [0, 1]");
  ensure_dir(options.out_dir);

  auto model = std::make_shared<ChainModel>(io::read_tensor(options.tensor_path),
                                            options.bandwidth);

  // Prosumer ids and, when capacity clusters are supplied, per-prosumer
  // panel sizes from the assigned cluster's mean peak reading.
  std::vector<std::string> ids;
  std::vector<SolarConfig> configs;
  const bool with_solar = !options.ci_matrix_path.empty();
  if (!options.assignments_path.empty()) {
    const auto assignments = io::read_assignments(options.assignments_path);
    if (assignments.empty())
      throw Error(ErrorKind::domain, "assignments file is empty");
    ClusterModel clusters;
    if (!options.cluster_model_path.empty())
      clusters = io::read_cluster_model(options.cluster_model_path);
    for (const auto& a : assignments) {
      ids.push_back(a.prosumer_id);
      SolarConfig config = options.solar;
      if (!clusters.clusters.empty()) {
        auto it = a.categories.find(options.capacity_feature);
        if (it == a.categories.end())
          throw Error(ErrorKind::config,
                      a.prosumer_id + " lacks feature " +
                          options.capacity_feature);
        if (it->second < 0 ||
            it->second >= static_cast<int>(clusters.clusters.size()))
          throw Error(ErrorKind::domain, "assigned category out of range");
        const double peak = clusters.clusters[it->second].mean;
        config.area_m2 = area_for_peak_reading(peak, config.efficiency,
                                               config.irradiance_wm2);
      }
      configs.push_back(config);
    }
  } else {
    if (options.prosumers < 1)
      throw Error(ErrorKind::config, "prosumers must be >= 1");
    ids = make_ids(options.id_prefix, options.prosumers);
    configs.assign(ids.size(), options.solar);
  }
  const int n = static_cast<int>(ids.size());

  RngStream root(options.seed);
  RngStream demand_root = root.substream("demand");

  std::vector<std::vector<std::array<double, kSlotsPerDay>>> demand(n);
  for (int i = 0; i < n; ++i) {
    RngStream rng = demand_root.substream(static_cast<std::uint64_t>(i) + 1);
    auto chain = personalize(model, ids[i], options.concentration, rng);
    const auto days = chain.sample_days(options.days, options.reinforcement, rng);
    demand[i].reserve(days.size());
    for (const auto& states : days) {
      std::array<double, kSlotsPerDay> kwh;
      for (int k = 0; k < kSlotsPerDay; ++k) kwh[k] = undiscretize(states[k]);
      demand[i].push_back(kwh);
    }
  }

  std::vector<std::vector<std::array<double, kSlotsPerDay>>> generation;
  if (with_solar) {
    const CiChain ci_chain(io::read_ci_matrix(options.ci_matrix_path),
                           options.ci_bandwidth);
    RngStream weather_root = root.substream("weather");
    generation.assign(n, {});
    if (options.shared_weather) {
      // One clearness trajectory per day for the whole cohort; prosumers
      // differ only through their own panel configuration.
      for (int d = 0; d < options.days; ++d) {
        SolarConfig geometry = options.solar;
        geometry.day_of_year =
            (options.solar.day_of_year - 1 + d) % 365 + 1;
        RngStream rng =
            weather_root.substream(static_cast<std::uint64_t>(d) + 1);
        const auto path = sample_ci_path(geometry, ci_chain, {}, rng);
        for (int i = 0; i < n; ++i) {
          SolarConfig config = configs[i];
          config.day_of_year = geometry.day_of_year;
          generation[i].push_back(generation_from_ci(config, path));
        }
      }
    } else {
      for (int i = 0; i < n; ++i) {
        RngStream rng =
            weather_root.substream(static_cast<std::uint64_t>(i) + 1);
        for (int d = 0; d < options.days; ++d) {
          SolarConfig config = configs[i];
          config.day_of_year = (options.solar.day_of_year - 1 + d) % 365 + 1;
          const auto path = sample_ci_path(config, ci_chain, {}, rng);
          generation[i].push_back(generation_from_ci(config, path));
        }
      }
    }
  }

  SynthRunSummary summary;
  summary.prosumers = n;
  summary.days = options.days;

  auto export_rows =
      [&](const std::vector<std::vector<std::array<double, kSlotsPerDay>>>&
              data) {
        io::ProfileExport rows;
        for (int i = 0; i < n; ++i)
          for (int d = 0; d < options.days; ++d) {
            rows.prosumer_ids.push_back(ids[i]);
            rows.day_index.push_back(d);
            rows.values.push_back(data[i][d]);
          }
        return rows;
      };

  const std::string demand_path = join_path(options.out_dir, "demand.csv");
  io::write_profile_export(demand_path, export_rows(demand));
  summary.files.push_back(demand_path);

  std::vector<std::pair<std::string, std::array<double, kSlotsPerDay>>>
      aggregates;
  auto mean_of = [&](const std::vector<
                     std::vector<std::array<double, kSlotsPerDay>>>& data) {
    std::vector<std::array<double, kSlotsPerDay>> flat;
    for (const auto& per : data)
      flat.insert(flat.end(), per.begin(), per.end());
    return aggregate(flat).mean;
  };
  aggregates.emplace_back("demand_mean", mean_of(demand));

  if (with_solar) {
    const std::string gen_path = join_path(options.out_dir, "generation.csv");
    io::write_profile_export(gen_path, export_rows(generation));
    summary.files.push_back(gen_path);
    aggregates.emplace_back("generation_mean", mean_of(generation));

    for (double p : options.penetrations) {
      // Fresh stream with the same label per level: the permutation is
      // identical, so raising penetration only adds prosumers.
      RngStream net_rng = root.substream("net");
      std::vector<std::size_t> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      net_rng.shuffle(perm);
      const auto m = static_cast<std::size_t>(std::llround(p * n));
      std::vector<bool> equipped(n, false);
      for (std::size_t r = 0; r < m; ++r) equipped[perm[r]] = true;

      std::vector<std::vector<std::array<double, kSlotsPerDay>>> net = demand;
      for (int i = 0; i < n; ++i)
        if (equipped[i])
          for (int d = 0; d < options.days; ++d)
            for (int k = 0; k < kSlotsPerDay; ++k)
              net[i][d][k] -= generation[i][d][k];

      char name[32];
      std::snprintf(name, sizeof name, "net_p%04d.csv",
                    static_cast<int>(std::llround(p * 1000)));
      const std::string net_path = join_path(options.out_dir, name);
      io::write_profile_export(net_path, export_rows(net));
      summary.files.push_back(net_path);

      char agg_name[32];
      std::snprintf(agg_name, sizeof agg_name, "net_mean_p%04d",
                    static_cast<int>(std::llround(p * 1000)));
      aggregates.emplace_back(agg_name, mean_of(net));
    }
  }

  const std::string agg_path = join_path(options.out_dir, "aggregate.csv");
  io::write_series_csv(agg_path, aggregates);
  summary.files.push_back(agg_path);
  return summary;
}

ValidationReport run_validate(const std::string& observed_store_path,
                              const std::string& synth_export_path,
                              const ValidateRunOptions& options,
                              const std::string& out_report_path) {
  const auto observed_profiles = io::read_profile_store(observed_store_path);
  std::vector<std::array<double, kSlotsPerDay>> observed;
  for (const auto& p : observed_profiles) {
    if (!options.day_type.empty() &&
        p.day_type != day_type_from_string(options.day_type))
      continue;
    observed.push_back(p.demand_kwh);
  }
  if (observed.empty())
    throw Error(ErrorKind::domain, "no observed profiles to validate against");

  const auto exported = io::read_profile_export(synth_export_path);
  if (exported.values.empty())
    throw Error(ErrorKind::domain, "no synthetic profiles in export");

  // Rebuild per-prosumer series in file order for lag scoring.
  std::vector<std::vector<double>> series;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < exported.values.size(); ++r) {
    auto [it, fresh] = index.emplace(exported.prosumer_ids[r], series.size());
    if (fresh) series.emplace_back();
    auto& s = series[it->second];
    s.insert(s.end(), exported.values[r].begin(), exported.values[r].end());
  }

  const auto report = validate_profiles(observed, exported.values, series,
                                        options.lags);
  io::write_report_json(out_report_path, report);
  return report;
}

std::vector<std::string> run_report(const ReportRunOptions& options) {
  if (options.out_dir.empty())
    throw Error(ErrorKind::config, "output directory required");
  if (options.tensor_path.empty() && options.store_path.empty())
    throw Error(ErrorKind::config, "report needs a tensor or a profile store");
  ensure_dir(options.out_dir);
  std::vector<std::string> files;

  if (!options.tensor_path.empty()) {
    const auto tensor = io::read_tensor(options.tensor_path);
    const auto grid = log_heatmap(counts_window(
        tensor, options.slot, options.state_lo, options.state_hi));
    char name[48];
    std::snprintf(name, sizeof name, "heatmap_slot%02d.csv", options.slot + 1);
    const std::string path = join_path(options.out_dir, name);
    io::write_grid_csv(path, grid);
    files.push_back(path);
  }

  if (!options.store_path.empty()) {
    const auto profiles = io::read_profile_store(options.store_path);
    std::vector<std::array<double, kSlotsPerDay>> weekday, weekend;
    for (const auto& p : profiles)
      (p.day_type == DayType::weekday ? weekday : weekend)
          .push_back(p.demand_kwh);
    std::vector<std::pair<std::string, std::array<double, kSlotsPerDay>>> rows;
    if (!weekday.empty())
      rows.emplace_back("weekday_mean", aggregate(weekday).mean);
    if (!weekend.empty())
      rows.emplace_back("weekend_mean", aggregate(weekend).mean);
    if (rows.empty())
      throw Error(ErrorKind::domain, "profile store is empty");
    const std::string path = join_path(options.out_dir, "mean_profiles.csv");
    io::write_series_csv(path, rows);
    files.push_back(path);
  }
  return files;
}

}  // namespace prosyn
