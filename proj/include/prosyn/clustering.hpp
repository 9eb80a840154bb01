#pragma once

#include <cstddef>
#include <vector>

namespace prosyn {

struct Cluster {
  double mean = 0.0;
  double variance = 0.0;  // population variance (divisor n); 0 for singletons
  std::size_t population = 0;
};

// Result of either fitting routine. Clusters are sorted by descending
// population; `assignments[i]` indexes `clusters` for input point i.
// `within_square_sum` equals sum over clusters of population * variance;
// `within_abs_sum` is the total absolute deviation from cluster means.
struct ClusterModel {
  std::vector<Cluster> clusters;
  std::vector<int> assignments;
  double within_square_sum = 0.0;
  double within_abs_sum = 0.0;
  double objective = 0.0;
  std::vector<double> objective_trace;  // MAP fit: value after each sweep
  int sweeps = 0;
  bool converged = false;

  std::size_t total_population() const;
};

// Prior for the nonparametric MAP fit. `new_cluster_variance` prices the
// spread of a yet-unseen cluster and doubles as the variance floor when
// costing existing clusters, so fresh singletons (sample variance 0) stay
// finitely priced during fitting. A nonpositive value defaults it to
// prior_variance / 10. Reported cluster variances are never floored.
struct MapDpPrior {
  double prior_mean = 0.0;
  double prior_variance = 1.0;
  double new_cluster_variance = 0.0;
  double concentration = 1.0;  // propensity to open new clusters
};

ClusterModel kmeans(const std::vector<double>& points, int k,
                    const std::vector<double>& init_means, int max_iter = 100);

ClusterModel map_dp(const std::vector<double>& points, const MapDpPrior& prior,
                    int max_iter = 200);

// Gaussian-mixture density of the fitted model. Population-weighted form
// integrates to (smooth population)/(total population); zero-variance
// clusters are point masses and excluded from the smooth part. The
// unweighted form sums unit-weight component densities over total
// population (kept for compatibility with sources that define it so).
double gmm_pdf(const ClusterModel& model, double x,
               bool population_weighted = true);

// Cluster populations as a concentration vector, in cluster order.
std::vector<double> cluster_counts(const ClusterModel& model);

}  // namespace prosyn
