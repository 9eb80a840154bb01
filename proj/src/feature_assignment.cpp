#include "prosyn/feature_assignment.hpp"

#include <cmath>
#include <numeric>

#include "prosyn/types.hpp"

namespace prosyn {

double DirichletFeatureModel::alpha_total() const {
  return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

double DirichletFeatureModel::mean(std::size_t k) const {
  return alpha[k] / alpha_total();
}

double DirichletFeatureModel::variance(std::size_t k) const {
  const double a0 = alpha_total();
  return alpha[k] * (a0 - alpha[k]) / (a0 * a0 * (a0 + 1.0));
}

DirichletFeatureModel alpha_from_labels(const std::string& feature_id,
                                        const std::vector<int>& labels, int m,
                                        double floor) {
  if (labels.empty())
    throw Error(ErrorKind::domain, "no labels to count");
  if (m <= 0) throw Error(ErrorKind::domain, "need at least one category");
  if (!(floor > 0))
    throw Error(ErrorKind::config, "concentration floor must be positive");
  DirichletFeatureModel model;
  model.feature_id = feature_id;
  model.alpha.assign(m, 0.0);
  for (int label : labels) {
    if (label < 0 || label >= m)
      throw Error(ErrorKind::domain, "label out of category range");
    model.alpha[label] += 1.0;
  }
  for (double& a : model.alpha)
    if (a == 0.0) a = floor;
  return model;
}

std::vector<double> dirichlet_sample(const DirichletFeatureModel& model,
                                     RngStream& rng) {
  if (model.alpha.empty())
    throw Error(ErrorKind::domain, "empty concentration vector");
  std::vector<double> q(model.alpha.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!(model.alpha[k] > 0))
      throw Error(ErrorKind::domain, "concentration must be positive");
    q[k] = rng.gamma(model.alpha[k]);
    sum += q[k];
  }
  // Gamma draws for tiny shapes can underflow to 0 collectively only with
  // vanishing probability; guard anyway to keep q a probability vector.
  if (sum <= 0) {
    q.assign(q.size(), 0.0);
    q[0] = 1.0;
    return q;
  }
  for (double& v : q) v /= sum;
  return q;
}

std::vector<std::size_t> categorical_counts(const std::vector<double>& q,
                                            std::size_t n_star,
                                            RngStream& rng) {
  if (q.empty()) throw Error(ErrorKind::domain, "empty probability vector");
  double sum = 0.0;
  for (double p : q) {
    if (!(p >= 0))
      throw Error(ErrorKind::domain, "negative category probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorKind::domain, "category probabilities must sum to 1");

  std::vector<double> cumulative(q.begin(), q.end());
  for (std::size_t k = 1; k < cumulative.size(); ++k)
    cumulative[k] += cumulative[k - 1];
  std::vector<std::size_t> counts(q.size(), 0);
  for (std::size_t i = 0; i < n_star; ++i)
    ++counts[categorical_draw(cumulative, rng)];
  return counts;
}

std::vector<FeatureAssignment> assign_features(
    const std::map<std::string, std::vector<std::size_t>>& counts,
    const std::vector<std::string>& prosumer_ids, RngStream& rng) {
  std::vector<FeatureAssignment> out(prosumer_ids.size());
  for (std::size_t i = 0; i < prosumer_ids.size(); ++i)
    out[i].prosumer_id = prosumer_ids[i];

  for (const auto& [feature_id, feature_counts] : counts) {
    std::size_t total = 0;
    for (std::size_t c : feature_counts) total += c;
    if (total != prosumer_ids.size())
      throw Error(ErrorKind::domain,
                  "category counts for " + feature_id +
                      " do not match population size");
    std::vector<int> pool;
    pool.reserve(total);
    for (std::size_t k = 0; k < feature_counts.size(); ++k)
      pool.insert(pool.end(), feature_counts[k], static_cast<int>(k));
    RngStream sub = rng.substream(feature_id);
    sub.shuffle(pool);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i].categories[feature_id] = pool[i];
  }
  return out;
}

}  // namespace prosyn
