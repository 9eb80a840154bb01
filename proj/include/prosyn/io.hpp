#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prosyn/clustering.hpp"
#include "prosyn/demand_chain.hpp"
#include "prosyn/feature_assignment.hpp"
#include "prosyn/solar_gen.hpp"
#include "prosyn/types.hpp"
#include "prosyn/validation.hpp"

namespace prosyn::io {

// Day-profile store: one row per (customer, date) with 48 demand columns
// and, when any profile carries generation, 48 generation columns.
void write_profile_store(const std::string& path,
                         const std::vector<DailyProfile>& profiles);
std::vector<DailyProfile> read_profile_store(const std::string& path);

// Sparse triplet tensor file: '#'-prefixed metadata, then
// slot,from,to,count rows with 1-based slots.
void write_tensor(const std::string& path, const TransitionTensor& tensor,
                  const std::string& source_hash = "");
TransitionTensor read_tensor(const std::string& path);

// Clearness matrix in the single-slot variant of the tensor format.
void write_ci_matrix(const std::string& path, const ClearnessMatrix& matrix,
                     const std::string& source_hash = "");
ClearnessMatrix read_ci_matrix(const std::string& path);

struct ClusterFitMeta {
  std::string method;  // "map_dp" or "kmeans"
  double prior_mean = 0.0;
  double prior_variance = 0.0;
  double new_cluster_variance = 0.0;
  double concentration = 0.0;
};

void write_cluster_model(const std::string& path, const ClusterModel& model,
                         const ClusterFitMeta& meta);
ClusterModel read_cluster_model(const std::string& path,
                                ClusterFitMeta* meta = nullptr);

void write_dirichlet_models(const std::string& path,
                            const std::vector<DirichletFeatureModel>& models);
std::vector<DirichletFeatureModel> read_dirichlet_models(
    const std::string& path);

// Long-format assignments: prosumer_id,feature_id,category.
void write_assignments(const std::string& path,
                       const std::vector<FeatureAssignment>& assignments);
std::vector<FeatureAssignment> read_assignments(const std::string& path);

// Synthesized profiles: prosumer_id,day,v00..v47.
struct ProfileExport {
  std::vector<std::string> prosumer_ids;  // one per row
  std::vector<int> day_index;             // one per row, 0-based
  std::vector<std::array<double, kSlotsPerDay>> values;
};

void write_profile_export(const std::string& path, const ProfileExport& data);
ProfileExport read_profile_export(const std::string& path);

// Named 48-column series (mean profiles, aggregates): name,v00..v47.
void write_series_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::array<double, kSlotsPerDay>>>&
        rows);

// Rectangular grid (heatmaps) with no header.
void write_grid_csv(const std::string& path,
                    const std::vector<std::vector<double>>& grid);

void write_report_json(const std::string& path,
                       const ValidationReport& report);

// FNV-1a over a file's bytes, as fixed-width hex.
std::string file_hash_hex(const std::string& path);

}  // namespace prosyn::io
