#include "prosyn/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prosyn/types.hpp"

namespace prosyn {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double neg_log_normal(double x, double mean, double variance) {
  const double d = x - mean;
  return 0.5 * std::log(kTwoPi * variance) + d * d / (2.0 * variance);
}

// Running first/second moments with exact add/remove, so a sweep can pull
// a point out of its cluster before costing the alternatives.
struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void remove(double x) {
    if (n == 1) {
      n = 0;
      mean = 0.0;
      m2 = 0.0;
      return;
    }
    const double old_mean = mean;
    --n;
    mean = old_mean - (x - old_mean) / static_cast<double>(n);
    m2 -= (x - old_mean) * (x - mean);
    if (m2 < 0) m2 = 0;
  }
  double variance() const {
    return n == 0 ? 0.0 : m2 / static_cast<double>(n);
  }
};

void require_finite(const std::vector<double>& points) {
  for (double x : points)
    if (!std::isfinite(x))
      throw Error(ErrorKind::domain, "non-finite input point");
}

// Rebuild a model from assignments: exact stats, clusters sorted by
// descending population (ties by mean), assignments remapped.
void finalize(const std::vector<double>& points, std::vector<int>& assign,
              ClusterModel& model) {
  int k = 0;
  for (int a : assign) k = std::max(k, a + 1);
  std::vector<RunningStats> stats(k);
  for (std::size_t i = 0; i < points.size(); ++i)
    stats[assign[i]].add(points[i]);

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (stats[a].n != stats[b].n) return stats[a].n > stats[b].n;
    return stats[a].mean < stats[b].mean;
  });
  std::vector<int> rank(k);
  for (int r = 0; r < k; ++r) rank[order[r]] = r;

  model.clusters.clear();
  model.clusters.reserve(k);
  for (int r = 0; r < k; ++r) {
    const auto& s = stats[order[r]];
    model.clusters.push_back({s.mean, s.variance(), s.n});
  }
  model.assignments.resize(assign.size());
  for (std::size_t i = 0; i < assign.size(); ++i)
    model.assignments[i] = rank[assign[i]];

  model.within_square_sum = 0.0;
  model.within_abs_sum = 0.0;
  for (const auto& c : model.clusters)
    model.within_square_sum += static_cast<double>(c.population) * c.variance;
  for (std::size_t i = 0; i < points.size(); ++i)
    model.within_abs_sum +=
        std::abs(points[i] - model.clusters[model.assignments[i]].mean);
}

}  // namespace

std::size_t ClusterModel::total_population() const {
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.population;
  return total;
}

ClusterModel kmeans(const std::vector<double>& points, int k,
                    const std::vector<double>& init_means, int max_iter) {
  require_finite(points);
  if (points.empty()) throw Error(ErrorKind::domain, "no points to cluster");
  if (k <= 0 || static_cast<std::size_t>(k) > points.size())
    throw Error(ErrorKind::domain, "cluster count out of range");
  if (init_means.size() != static_cast<std::size_t>(k))
    throw Error(ErrorKind::domain, "need one initial mean per cluster");
  if (max_iter < 1) throw Error(ErrorKind::config, "max_iter must be >= 1");

  std::vector<double> means = init_means;
  std::vector<int> assign(points.size(), -1);
  ClusterModel model;
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      int best = 0;
      double best_d = std::abs(points[i] - means[0]);
      for (int c = 1; c < k; ++c) {
        const double d = std::abs(points[i] - means[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    std::vector<double> sums(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      sums[assign[i]] += points[i];
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        means[c] = sums[c] / static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: reseed with the point farthest from its own mean.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = std::abs(points[i] - means[assign[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      means[c] = points[far];
      assign[far] = c;
      changed = true;
    }
    model.sweeps = iter + 1;
    if (!changed) {
      model.converged = true;
      break;
    }
  }
  finalize(points, assign, model);
  model.objective = model.within_square_sum;
  return model;
}

ClusterModel map_dp(const std::vector<double>& points, const MapDpPrior& prior,
                    int max_iter) {
  require_finite(points);
  if (points.empty()) throw Error(ErrorKind::domain, "no points to cluster");
  if (!(prior.prior_variance > 0))
    throw Error(ErrorKind::config, "prior_variance must be positive");
  if (!(prior.concentration > 0))
    throw Error(ErrorKind::config, "concentration must be positive");
  if (max_iter < 1) throw Error(ErrorKind::config, "max_iter must be >= 1");

  const double floor_var = prior.new_cluster_variance > 0
                               ? prior.new_cluster_variance
                               : prior.prior_variance / 10.0;
  const double log_alpha = std::log(prior.concentration);
  const double new_cost_base =
      -log_alpha;  // plus predictive under the prior, computed per point
  const double prior_pred_var = prior.prior_variance + floor_var;

  const std::size_t n = points.size();
  std::vector<int> assign(n, 0);
  std::vector<RunningStats> stats(1);
  for (double x : points) stats[0].add(x);

  // Full CRP-style objective over current assignments. Constant terms in
  // n and alpha are dropped; only relative changes across sweeps matter.
  auto objective = [&]() {
    double e = 0.0;
    int live = 0;
    for (const auto& s : stats) {
      if (s.n == 0) continue;
      ++live;
      e -= std::lgamma(static_cast<double>(s.n));
    }
    e -= live * log_alpha;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = stats[assign[i]];
      e += neg_log_normal(points[i], s.mean,
                          std::max(s.variance(), floor_var));
    }
    return e;
  };

  ClusterModel model;
  std::vector<int> best_assign = assign;
  double best_e = objective();
  model.objective_trace.push_back(best_e);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = points[i];
      stats[assign[i]].remove(x);

      int best = -1;
      double best_cost = new_cost_base +
                         neg_log_normal(x, prior.prior_mean, prior_pred_var);
      for (std::size_t c = 0; c < stats.size(); ++c) {
        if (stats[c].n == 0) continue;
        const double cost =
            neg_log_normal(x, stats[c].mean,
                           std::max(stats[c].variance(), floor_var)) -
            std::log(static_cast<double>(stats[c].n));
        if (cost < best_cost) {
          best_cost = cost;
          best = static_cast<int>(c);
        }
      }
      if (best < 0) {
        // Reuse an emptied slot if one exists, else open a new one.
        best = static_cast<int>(stats.size());
        for (std::size_t c = 0; c < stats.size(); ++c)
          if (stats[c].n == 0) {
            best = static_cast<int>(c);
            break;
          }
        if (best == static_cast<int>(stats.size())) stats.emplace_back();
      }
      if (best != assign[i]) changed = true;
      assign[i] = best;
      stats[best].add(x);
    }

    model.sweeps = iter + 1;
    const double e = objective();
    if (e <= best_e + 1e-12) {
      best_e = e;
      best_assign = assign;
      model.objective_trace.push_back(e);
    } else {
      // Objective rose: keep the previous sweep's state and stop.
      break;
    }
    if (!changed) {
      model.converged = true;
      break;
    }
  }

  // Compact cluster ids in best_assign to 0..K-1 before finalizing.
  std::vector<int> remap(stats.size(), -1);
  int next = 0;
  for (int& a : best_assign) {
    if (remap[a] < 0) remap[a] = next++;
    a = remap[a];
  }
  finalize(points, best_assign, model);
  model.objective = best_e;
  return model;
}

double gmm_pdf(const ClusterModel& model, double x, bool population_weighted) {
  if (model.clusters.empty())
    throw Error(ErrorKind::domain, "empty cluster model");
  const double total = static_cast<double>(model.total_population());
  if (total == 0) throw Error(ErrorKind::domain, "cluster model without mass");
  double sum = 0.0;
  for (const auto& c : model.clusters) {
    if (!(c.variance > 0)) continue;  // point mass, not part of the density
    const double d = x - c.mean;
    const double dens = std::exp(-d * d / (2.0 * c.variance)) /
                        std::sqrt(kTwoPi * c.variance);
    sum += population_weighted ? static_cast<double>(c.population) * dens
                               : dens;
  }
  return sum / total;
}

std::vector<double> cluster_counts(const ClusterModel& model) {
  std::vector<double> alpha;
  alpha.reserve(model.clusters.size());
  for (const auto& c : model.clusters)
    alpha.push_back(static_cast<double>(c.population));
  return alpha;
}

}  // namespace prosyn
