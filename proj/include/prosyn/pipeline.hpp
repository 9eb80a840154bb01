#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prosyn/clustering.hpp"
#include "prosyn/data_model.hpp"
#include "prosyn/solar_gen.hpp"
#include "prosyn/validation.hpp"

namespace prosyn {

// Per-customer scalar feature pulled out of a profile store. Customers
// missing the needed signal (e.g. no generation column) are skipped.
struct FeatureExtraction {
  std::vector<std::string> customer_ids;
  std::vector<double> values;
  std::size_t skipped = 0;
};

// kind: "peak_generation", "peak_demand", or "mean_demand".
FeatureExtraction extract_feature(const std::vector<DailyProfile>& profiles,
                                  const std::string& kind);

int day_of_year(Date date);

struct IngestRunOptions {
  CsvSchema schema;
  Calendar calendar;
};

struct IngestSummary {
  std::size_t rows_total = 0;
  std::size_t rows_rejected = 0;
  std::size_t customers = 0;
  std::size_t profiles = 0;
  std::size_t dropped_days = 0;
  std::size_t duplicate_readings = 0;
  std::size_t partial_generation_days = 0;
};

IngestSummary run_ingest(const std::string& csv_path,
                         const IngestRunOptions& options,
                         const std::string& out_store_path);

struct ClusterRunOptions {
  std::string method = "map_dp";  // or "kmeans"
  std::string feature = "peak_generation";
  double concentration = 1.0;
  bool prior_from_data = true;  // naive prior: sample mean/variance
  double prior_mean = 0.0;
  double prior_variance = 0.0;
  double new_cluster_variance = 0.0;  // 0: prior_variance / 10
  int k = 0;                          // kmeans only
  std::vector<double> init_means;     // kmeans; empty: quantile seeding
  int max_iter = 200;
};

ClusterModel run_cluster(const std::string& store_path,
                         const ClusterRunOptions& options,
                         const std::string& out_model_path);

struct AssignRunOptions {
  std::uint64_t seed = 1;
  std::size_t population = 0;  // number of unobserved prosumers
  std::string feature_id = "capacity";
  std::string id_prefix = "P";
};

struct AssignSummary {
  std::vector<double> alpha;
  std::vector<double> probabilities;   // the Dirichlet draw used
  std::vector<std::size_t> counts;     // categorical counts assigned
};

AssignSummary run_assign(const std::string& cluster_model_path,
                         const AssignRunOptions& options,
                         const std::string& out_assignments_path,
                         const std::string& out_dirichlet_path);

struct BuildDemandOptions {
  DayType day_type = DayType::weekday;
  int n_max = kDefaultMaxState;
};

struct BuildSummary {
  std::size_t entries = 0;     // distinct sparse entries
  double transitions = 0.0;    // total counted transitions
  std::size_t population = 0;  // customers (demand) or days (solar)
};

BuildSummary run_build_demand(const std::string& store_path,
                              const BuildDemandOptions& options,
                              const std::string& out_tensor_path);

struct BuildSolarOptions {
  SolarConfig solar;  // geometry; day_of_year is taken from each profile
};

BuildSummary run_build_solar(const std::string& store_path,
                             const BuildSolarOptions& options,
                             const std::string& out_matrix_path);

struct SynthRunOptions {
  std::string tensor_path;
  std::string ci_matrix_path;      // empty: demand only
  std::string cluster_model_path;  // with assignments: per-prosumer PV size
  std::string assignments_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  int prosumers = 10;  // ignored when assignments provide the ids
  int days = 1;
  double bandwidth = kDefaultBandwidth;
  double ci_bandwidth = kDefaultBandwidth;
  double reinforcement = 1.0;
  double concentration = 0.0;  // 0: per-row observed total
  bool shared_weather = false;
  std::vector<double> penetrations;
  SolarConfig solar;  // geometry + default panel size
  std::string capacity_feature = "capacity";
  std::string id_prefix = "P";
};

struct SynthRunSummary {
  int prosumers = 0;
  int days = 0;
  std::vector<std::string> files;
};

SynthRunSummary run_synth(const SynthRunOptions& options);

struct ValidateRunOptions {
  std::string day_type;  // "", "weekday", or "weekend"
  std::vector<int> lags = {kSlotsPerDay};
};

ValidationReport run_validate(const std::string& observed_store_path,
                              const std::string& synth_export_path,
                              const ValidateRunOptions& options,
                              const std::string& out_report_path);

struct ReportRunOptions {
  std::string tensor_path;  // optional: log-count heatmap window
  int slot = 18;
  int state_lo = 0;
  int state_hi = 60;
  std::string store_path;  // optional: mean profiles per day type
  std::string out_dir;
};

std::vector<std::string> run_report(const ReportRunOptions& options);

}  // namespace prosyn
