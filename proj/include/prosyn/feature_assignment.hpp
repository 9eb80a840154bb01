#pragma once

#include <map>
#include <string>
#include <vector>

#include "prosyn/rng.hpp"

namespace prosyn {

// Concentration floor for categories with zero observed count, keeping
// the Dirichlet proper while letting rare categories stay possible.
inline constexpr double kAlphaFloor = 1e-3;

struct DirichletFeatureModel {
  std::string feature_id;
  std::vector<double> alpha;  // all entries > 0

  std::size_t categories() const { return alpha.size(); }
  double alpha_total() const;
  // Analytic Dir(alpha) moments for component k.
  double mean(std::size_t k) const;
  double variance(std::size_t k) const;
};

struct FeatureAssignment {
  std::string prosumer_id;
  std::map<std::string, int> categories;  // feature_id -> category index

  bool operator==(const FeatureAssignment&) const = default;
};

// Count labels into a concentration vector, flooring absent categories.
DirichletFeatureModel alpha_from_labels(const std::string& feature_id,
                                        const std::vector<int>& labels, int m,
                                        double floor = kAlphaFloor);

// One Dir(alpha) draw via normalized Gamma variates.
std::vector<double> dirichlet_sample(const DirichletFeatureModel& model,
                                     RngStream& rng);

// Multinomial(n_star, q) draw as repeated categorical sampling.
std::vector<std::size_t> categorical_counts(const std::vector<double>& q,
                                            std::size_t n_star,
                                            RngStream& rng);

// Distribute per-feature category counts over prosumers: each feature's
// count-expanded category list is shuffled independently, so features are
// independent across prosumers. Counts must sum to the population size.
std::vector<FeatureAssignment> assign_features(
    const std::map<std::string, std::vector<std::size_t>>& counts,
    const std::vector<std::string>& prosumer_ids, RngStream& rng);

}  // namespace prosyn
