#include "prosyn.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "prosyn/data_model.hpp"
#include "prosyn/demand_chain.hpp"
#include "prosyn/demo.hpp"
#include "prosyn/feature_assignment.hpp"
#include "prosyn/io.hpp"
#include "prosyn/pipeline.hpp"
#include "prosyn/rng.hpp"
#include "prosyn/solar_gen.hpp"
#include "prosyn/types.hpp"
#include "prosyn/validation.hpp"

using nlohmann::json;

extern "C" {

struct prosyn_rng {
  prosyn::RngStream stream;
};

struct prosyn_profiles {
  std::vector<prosyn::DailyProfile> profiles;
};

struct prosyn_tensor {
  prosyn::TransitionTensor tensor;
};

struct prosyn_chain {
  prosyn::ChainModel model;
  int prev_last = -1;  // chains consecutive calls through slot 0
};

}  // extern "C"

namespace {

thread_local std::string t_last_error;

prosyn_status status_of(prosyn::ErrorKind kind) {
  switch (kind) {
    case prosyn::ErrorKind::io:
      return PROSYN_ERR_IO;
    case prosyn::ErrorKind::parse:
      return PROSYN_ERR_PARSE;
    case prosyn::ErrorKind::domain:
      return PROSYN_ERR_DOMAIN;
    case prosyn::ErrorKind::config:
      return PROSYN_ERR_CONFIG;
  }
  return PROSYN_ERR_INTERNAL;
}

// No exception may cross the C boundary.
template <typename F>
prosyn_status guarded(F&& body) {
  try {
    body();
    t_last_error.clear();
    return PROSYN_OK;
  } catch (const prosyn::Error& e) {
    t_last_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    t_last_error = e.what();
    return PROSYN_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return PROSYN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return PROSYN_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unrecognized failure";
    return PROSYN_ERR_INTERNAL;
  }
}

prosyn_status invalid(const char* message) {
  t_last_error = message;
  return PROSYN_ERR_INVALID_ARG;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_summary(char** out, const json& j) {
  if (out) *out = dup_string(j.dump());
}

json parse_options(const char* options_json) {
  json j = json::parse(options_json);
  if (!j.is_object())
    throw prosyn::Error(prosyn::ErrorKind::config,
                        "options must be a JSON object");
  return j;
}

std::string req_string(const json& j, const char* key) {
  if (!j.contains(key))
    throw prosyn::Error(prosyn::ErrorKind::config,
                        std::string("missing required option: ") + key);
  return j.at(key).get<std::string>();
}

std::vector<double> number_list(const json& j, const char* key) {
  std::vector<double> out;
  if (j.contains(key))
    for (const auto& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

prosyn::SolarConfig solar_from_json(const json& j) {
  prosyn::SolarConfig config;
  config.latitude_deg = j.value("latitude", config.latitude_deg);
  config.panel_tilt_deg = j.value("tilt", config.panel_tilt_deg);
  config.panel_azimuth_deg = j.value("azimuth", config.panel_azimuth_deg);
  config.efficiency = j.value("efficiency", config.efficiency);
  config.area_m2 = j.value("area", config.area_m2);
  config.irradiance_wm2 = j.value("irradiance", config.irradiance_wm2);
  config.day_of_year = j.value("day_of_year", config.day_of_year);
  return config;
}

json report_to_json(const prosyn::ValidationReport& report) {
  json autocorr = json::object();
  for (const auto& [lag, value] : report.autocorrelation_by_lag)
    autocorr[std::to_string(lag)] = value;
  return json{{"mae_percent", report.mae.percent},
              {"mae_slots_used", report.mae.slots_used},
              {"mae_slots_excluded", report.mae.slots_excluded},
              {"max_abs_error", report.max_error.value},
              {"max_abs_error_slot", report.max_error.slot},
              {"autocorrelation", autocorr},
              {"observed_profiles", report.observed_profiles},
              {"synthetic_profiles", report.synthetic_profiles}};
}

}  // namespace

extern "C" {

const char* prosyn_version(void) { return "0.1.0"; }

const char* prosyn_last_error(void) { return t_last_error.c_str(); }

void prosyn_string_free(char* s) { std::free(s); }

/* ---------------- random streams ---------------- */

prosyn_status prosyn_rng_create(uint64_t seed, prosyn_rng** out) {
  if (!out) return invalid("out is null");
  return guarded([&] { *out = new prosyn_rng{prosyn::RngStream(seed)}; });
}

void prosyn_rng_destroy(prosyn_rng* rng) { delete rng; }

prosyn_status prosyn_rng_uniform(prosyn_rng* rng, double* out) {
  if (!rng || !out) return invalid("rng/out is null");
  return guarded([&] { *out = rng->stream.uniform01(); });
}

prosyn_status prosyn_rng_normal(prosyn_rng* rng, double* out) {
  if (!rng || !out) return invalid("rng/out is null");
  return guarded([&] { *out = rng->stream.normal(); });
}

prosyn_status prosyn_rng_gamma(prosyn_rng* rng, double shape, double* out) {
  if (!rng || !out) return invalid("rng/out is null");
  return guarded([&] { *out = rng->stream.gamma(shape); });
}

/* ---------------- scalar model operations ---------------- */

prosyn_status prosyn_discretize(double kwh, int n_max, int* out) {
  if (!out) return invalid("out is null");
  if (n_max < 0) return invalid("n_max must be >= 0");
  return guarded([&] { *out = prosyn::discretize_energy(kwh, n_max); });
}

double prosyn_undiscretize(int state) { return prosyn::undiscretize(state); }

prosyn_status prosyn_time_irradiance_factor(double latitude_deg,
                                            double tilt_deg,
                                            double azimuth_from_north_deg,
                                            int day_of_year, int slot,
                                            double* out) {
  if (!out) return invalid("out is null");
  if (slot < 0 || slot >= PROSYN_SLOTS_PER_DAY)
    return invalid("slot must be in 0..47");
  return guarded([&] {
    prosyn::SolarConfig config;
    config.latitude_deg = latitude_deg;
    config.panel_tilt_deg = tilt_deg;
    config.panel_azimuth_deg = azimuth_from_north_deg;
    config.day_of_year = day_of_year;
    config.validate();
    *out = prosyn::time_irradiance_factor(config, slot);
  });
}

prosyn_status prosyn_kde_row(const double* counts, size_t n, double bandwidth,
                             double* out_probabilities) {
  if (!counts || !out_probabilities || n == 0)
    return invalid("counts/out is null or empty");
  return guarded([&] {
    std::vector<double> row(counts, counts + n);
    prosyn::SmoothedRow smoothed = prosyn::kde_row(row, bandwidth);
    std::memcpy(out_probabilities, smoothed.p.data(), n * sizeof(double));
  });
}

prosyn_status prosyn_dirichlet_sample(const double* alpha, size_t n,
                                      prosyn_rng* rng, double* out_q) {
  if (!alpha || !rng || !out_q || n == 0)
    return invalid("alpha/rng/out is null or empty");
  return guarded([&] {
    prosyn::DirichletFeatureModel model;
    model.alpha.assign(alpha, alpha + n);
    std::vector<double> q = prosyn::dirichlet_sample(model, rng->stream);
    std::memcpy(out_q, q.data(), n * sizeof(double));
  });
}

prosyn_status prosyn_autocorrelation(const double* series, size_t n, int lag,
                                     double* out) {
  if (!series || !out) return invalid("series/out is null");
  return guarded([&] {
    *out = prosyn::autocorrelation({series, n}, lag);
  });
}

prosyn_status prosyn_mae_percent(const double* observed,
                                 const double* synthetic, size_t n,
                                 double* out) {
  if (!observed || !synthetic || !out) return invalid("input/out is null");
  return guarded([&] {
    *out = prosyn::mean_absolute_error_percent({observed, n}, {synthetic, n})
               .percent;
  });
}

/* ---------------- day-profile stores ---------------- */

prosyn_status prosyn_profiles_load(const char* path, prosyn_profiles** out) {
  if (!path || !out) return invalid("path/out is null");
  return guarded([&] {
    auto handle = std::make_unique<prosyn_profiles>();
    handle->profiles = prosyn::io::read_profile_store(path);
    *out = handle.release();
  });
}

prosyn_status prosyn_profiles_save(const prosyn_profiles* profiles,
                                   const char* path) {
  if (!profiles || !path) return invalid("profiles/path is null");
  return guarded(
      [&] { prosyn::io::write_profile_store(path, profiles->profiles); });
}

prosyn_status prosyn_profiles_count(const prosyn_profiles* profiles,
                                    size_t* out) {
  if (!profiles || !out) return invalid("profiles/out is null");
  *out = profiles->profiles.size();
  return PROSYN_OK;
}

void prosyn_profiles_destroy(prosyn_profiles* profiles) { delete profiles; }

/* ---------------- transition tensors and sampling ---------------- */

prosyn_status prosyn_tensor_build(const prosyn_profiles* profiles,
                                  const char* day_type, int n_max,
                                  prosyn_tensor** out) {
  if (!profiles || !day_type || !out)
    return invalid("profiles/day_type/out is null");
  if (n_max <= 0) return invalid("n_max must be > 0");
  return guarded([&] {
    auto handle = std::make_unique<prosyn_tensor>();
    handle->tensor = prosyn::build_tensor(
        profiles->profiles, prosyn::day_type_from_string(day_type), n_max);
    *out = handle.release();
  });
}

prosyn_status prosyn_tensor_load(const char* path, prosyn_tensor** out) {
  if (!path || !out) return invalid("path/out is null");
  return guarded([&] {
    auto handle = std::make_unique<prosyn_tensor>();
    handle->tensor = prosyn::io::read_tensor(path);
    *out = handle.release();
  });
}

prosyn_status prosyn_tensor_save(const prosyn_tensor* tensor,
                                 const char* path) {
  if (!tensor || !path) return invalid("tensor/path is null");
  return guarded([&] { prosyn::io::write_tensor(path, tensor->tensor); });
}

prosyn_status prosyn_tensor_total(const prosyn_tensor* tensor, double* out) {
  if (!tensor || !out) return invalid("tensor/out is null");
  double total = 0.0;
  for (int k = 0; k < prosyn::kSlotsPerDay; ++k)
    total += tensor->tensor.slot_total(k);
  *out = total;
  return PROSYN_OK;
}

void prosyn_tensor_destroy(prosyn_tensor* tensor) { delete tensor; }

prosyn_status prosyn_chain_create(const prosyn_tensor* tensor,
                                  double bandwidth, prosyn_chain** out) {
  if (!tensor || !out) return invalid("tensor/out is null");
  return guarded([&] {
    *out = new prosyn_chain{prosyn::ChainModel(tensor->tensor, bandwidth), -1};
  });
}

prosyn_status prosyn_chain_sample_day(prosyn_chain* chain, prosyn_rng* rng,
                                      double* out_kwh) {
  if (!chain || !rng || !out_kwh) return invalid("chain/rng/out is null");
  return guarded([&] {
    auto states = chain->model.sample_day_states(rng->stream, chain->prev_last);
    chain->prev_last = states.back();
    for (int k = 0; k < prosyn::kSlotsPerDay; ++k)
      out_kwh[k] = prosyn::undiscretize(states[static_cast<std::size_t>(k)]);
  });
}

void prosyn_chain_destroy(prosyn_chain* chain) { delete chain; }

/* ---------------- pipeline commands ---------------- */

prosyn_status prosyn_cmd_gen_data(const char* options_json,
                                  char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    prosyn::demo::DatasetOptions options;
    std::string out_path = req_string(j, "out");
    options.customers = j.value("customers", options.customers);
    options.days = j.value("days", options.days);
    options.seed = j.value("seed", options.seed);
    options.start_date = j.value("start_date", options.start_date);
    options.with_generation =
        j.value("with_generation", options.with_generation);
    std::size_t rows = prosyn::demo::write_meter_csv(out_path, options);
    set_summary(summary_json, json{{"rows", rows}, {"path", out_path}});
  });
}

prosyn_status prosyn_cmd_ingest(const char* options_json,
                                char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    std::string input = req_string(j, "input");
    std::string out_store = req_string(j, "out_store");
    prosyn::IngestRunOptions options;
    if (j.contains("schema")) {
      const json& s = j.at("schema");
      options.schema.customer_id =
          s.value("customer_id", options.schema.customer_id);
      options.schema.timestamp = s.value("timestamp", options.schema.timestamp);
      options.schema.demand = s.value("demand", options.schema.demand);
      options.schema.generation =
          s.value("generation", options.schema.generation);
      if (s.contains("features"))
        for (const auto& f : s.at("features"))
          options.schema.feature_columns.push_back(f.get<std::string>());
    }
    if (j.contains("holidays"))
      for (const auto& h : j.at("holidays"))
        options.calendar.holidays.insert(
            prosyn::parse_date(h.get<std::string>()));
    options.calendar.all_weekday =
        j.value("all_weekday", options.calendar.all_weekday);
    prosyn::IngestSummary s = prosyn::run_ingest(input, options, out_store);
    set_summary(summary_json,
                json{{"rows_total", s.rows_total},
                     {"rows_rejected", s.rows_rejected},
                     {"customers", s.customers},
                     {"profiles", s.profiles},
                     {"dropped_days", s.dropped_days},
                     {"duplicate_readings", s.duplicate_readings},
                     {"partial_generation_days", s.partial_generation_days}});
  });
}

prosyn_status prosyn_cmd_cluster(const char* options_json,
                                 char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    std::string store = req_string(j, "store");
    std::string out_model = req_string(j, "out_model");
    prosyn::ClusterRunOptions options;
    options.method = j.value("method", options.method);
    options.feature = j.value("feature", options.feature);
    options.concentration = j.value("concentration", options.concentration);
    options.prior_from_data =
        j.value("prior_from_data", options.prior_from_data);
    options.prior_mean = j.value("prior_mean", options.prior_mean);
    options.prior_variance = j.value("prior_variance", options.prior_variance);
    options.new_cluster_variance =
        j.value("new_cluster_variance", options.new_cluster_variance);
    options.k = j.value("k", options.k);
    options.init_means = number_list(j, "init_means");
    options.max_iter = j.value("max_iter", options.max_iter);
    if (j.contains("prior_mean") || j.contains("prior_variance"))
      options.prior_from_data = j.value("prior_from_data", false);
    prosyn::ClusterModel model = prosyn::run_cluster(store, options, out_model);
    json clusters = json::array();
    for (const auto& c : model.clusters)
      clusters.push_back(json{{"mean", c.mean},
                              {"variance", c.variance},
                              {"population", c.population}});
    set_summary(summary_json,
                json{{"clusters", clusters},
                     {"objective", model.objective},
                     {"error_square_sum", model.within_square_sum},
                     {"error_abs_sum", model.within_abs_sum},
                     {"sweeps", model.sweeps},
                     {"converged", model.converged}});
  });
}

prosyn_status prosyn_cmd_assign(const char* options_json,
                                char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    std::string cluster_model = req_string(j, "cluster_model");
    std::string out_assignments = req_string(j, "out_assignments");
    std::string out_dirichlet = req_string(j, "out_dirichlet");
    prosyn::AssignRunOptions options;
    options.seed = j.value("seed", options.seed);
    options.population = j.value("population", options.population);
    options.feature_id = j.value("feature_id", options.feature_id);
    options.id_prefix = j.value("id_prefix", options.id_prefix);
    prosyn::AssignSummary s = prosyn::run_assign(cluster_model, options,
                                                 out_assignments,
                                                 out_dirichlet);
    set_summary(summary_json, json{{"alpha", s.alpha},
                                   {"probabilities", s.probabilities},
                                   {"counts", s.counts}});
  });
}

prosyn_status prosyn_cmd_build_demand(const char* options_json,
                                      char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    std::string store = req_string(j, "store");
    std::string out_tensor = req_string(j, "out_tensor");
    prosyn::BuildDemandOptions options;
    options.day_type =
        prosyn::day_type_from_string(j.value("day_type", "weekday"));
    options.n_max = j.value("n_max", options.n_max);
    prosyn::BuildSummary s =
        prosyn::run_build_demand(store, options, out_tensor);
    set_summary(summary_json, json{{"entries", s.entries},
                                   {"transitions", s.transitions},
                                   {"population", s.population}});
  });
}

prosyn_status prosyn_cmd_build_solar(const char* options_json,
                                     char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    std::string store = req_string(j, "store");
    std::string out_matrix = req_string(j, "out_matrix");
    prosyn::BuildSolarOptions options;
    if (j.contains("solar")) options.solar = solar_from_json(j.at("solar"));
    prosyn::BuildSummary s =
        prosyn::run_build_solar(store, options, out_matrix);
    set_summary(summary_json, json{{"entries", s.entries},
                                   {"transitions", s.transitions},
                                   {"population", s.population}});
  });
}

prosyn_status prosyn_cmd_synth(const char* options_json, char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    prosyn::SynthRunOptions options;
    options.tensor_path = req_string(j, "tensor");
    options.out_dir = req_string(j, "out_dir");
    options.ci_matrix_path = j.value("ci_matrix", options.ci_matrix_path);
    options.cluster_model_path =
        j.value("cluster_model", options.cluster_model_path);
    options.assignments_path =
        j.value("assignments", options.assignments_path);
    options.seed = j.value("seed", options.seed);
    options.prosumers = j.value("prosumers", options.prosumers);
    options.days = j.value("days", options.days);
    options.bandwidth = j.value("bandwidth", options.bandwidth);
    options.ci_bandwidth = j.value("ci_bandwidth", options.ci_bandwidth);
    options.reinforcement = j.value("reinforcement", options.reinforcement);
    options.concentration = j.value("concentration", options.concentration);
    options.shared_weather =
        j.value("shared_weather", options.shared_weather);
    options.penetrations = number_list(j, "penetrations");
    if (j.contains("solar")) options.solar = solar_from_json(j.at("solar"));
    options.capacity_feature =
        j.value("capacity_feature", options.capacity_feature);
    options.id_prefix = j.value("id_prefix", options.id_prefix);
    prosyn::SynthRunSummary s = prosyn::run_synth(options);
    set_summary(summary_json, json{{"prosumers", s.prosumers},
                                   {"days", s.days},
                                   {"files", s.files}});
  });
}

prosyn_status prosyn_cmd_validate(const char* options_json,
                                  char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    std::string observed = req_string(j, "observed_store");
    std::string synthetic = req_string(j, "synthetic");
    std::string out_report = req_string(j, "out_report");
    prosyn::ValidateRunOptions options;
    options.day_type = j.value("day_type", options.day_type);
    if (j.contains("lags")) {
      options.lags.clear();
      for (const auto& lag : j.at("lags"))
        options.lags.push_back(lag.get<int>());
    }
    prosyn::ValidationReport report =
        prosyn::run_validate(observed, synthetic, options, out_report);
    set_summary(summary_json, report_to_json(report));
  });
}

prosyn_status prosyn_cmd_report(const char* options_json,
                                char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  if (!options_json) return invalid("options_json is null");
  return guarded([&] {
    json j = parse_options(options_json);
    prosyn::ReportRunOptions options;
    options.out_dir = req_string(j, "out_dir");
    options.tensor_path = j.value("tensor", options.tensor_path);
    options.slot = j.value("slot", options.slot + 1) - 1;  // 1-based outside
    options.state_lo = j.value("state_lo", options.state_lo);
    options.state_hi = j.value("state_hi", options.state_hi);
    options.store_path = j.value("store", options.store_path);
    std::vector<std::string> files = prosyn::run_report(options);
    set_summary(summary_json, json{{"files", files}});
  });
}

}  // extern "C"
