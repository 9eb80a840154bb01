#include "prosyn/validation.hpp"

#include <cmath>

namespace prosyn {

MaeResult mean_absolute_error_percent(std::span<const double> observed,
                                      std::span<const double> synthetic) {
  if (observed.size() != synthetic.size() || observed.empty())
    throw Error(ErrorKind::domain, "profiles must have equal nonzero length");
  MaeResult r;
  double sum = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed[i] == 0.0) {
      ++r.slots_excluded;
      continue;
    }
    sum += std::abs(observed[i] - synthetic[i]) / std::abs(observed[i]);
    ++r.slots_used;
  }
  if (r.slots_used == 0)
    throw Error(ErrorKind::domain,
                "observed profile is zero everywhere: error is undefined");
  r.percent = 100.0 * sum / r.slots_used;
  return r;
}

MaxErrorResult max_absolute_error(std::span<const double> observed,
                                  std::span<const double> synthetic) {
  if (observed.size() != synthetic.size() || observed.empty())
    throw Error(ErrorKind::domain, "profiles must have equal nonzero length");
  MaxErrorResult r;
  r.value = std::abs(observed[0] - synthetic[0]);
  r.slot = 1;
  for (std::size_t i = 1; i < observed.size(); ++i) {
    const double d = std::abs(observed[i] - synthetic[i]);
    if (d > r.value) {
      r.value = d;
      r.slot = static_cast<int>(i) + 1;
    }
  }
  return r;
}

double autocorrelation(std::span<const double> series, int lag) {
  const int n = static_cast<int>(series.size());
  if (lag < 1 || lag >= n)
    throw Error(ErrorKind::domain, "lag must satisfy 1 <= lag < length");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : series) var += (x - mean) * (x - mean);
  var /= (n - 1);
  if (var == 0.0)
    throw Error(ErrorKind::domain,
                "series has zero variance: autocorrelation undefined");
  double acc = 0.0;
  for (int t = 0; t + lag < n; ++t)
    acc += (series[t] - mean) * (series[t + lag] - mean);
  return acc / ((n - lag) * var);
}

std::vector<std::vector<double>> counts_window(const TransitionTensor& tensor,
                                               int slot, int lo, int hi) {
  if (lo < 0 || hi > tensor.n_max || lo > hi)
    throw Error(ErrorKind::domain, "state window out of range");
  std::vector<std::vector<double>> grid(
      hi - lo + 1, std::vector<double>(hi - lo + 1, 0.0));
  for (int i = lo; i <= hi; ++i) {
    const auto row = tensor.row_counts(slot, i);
    for (int j = lo; j <= hi; ++j) grid[i - lo][j - lo] = row[j];
  }
  return grid;
}

std::vector<std::vector<double>> log_heatmap(
    const std::vector<std::vector<double>>& counts) {
  std::vector<std::vector<double>> grid(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    grid[i].resize(counts[i].size());
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      if (counts[i][j] < 0)
        throw Error(ErrorKind::domain, "negative count in heatmap input");
      grid[i][j] = std::log10(counts[i][j] + 1.0);
    }
  }
  return grid;
}

AggregateProfiles aggregate(
    const std::vector<std::array<double, kSlotsPerDay>>& profiles) {
  if (profiles.empty())
    throw Error(ErrorKind::domain, "nothing to aggregate");
  AggregateProfiles agg;
  agg.count = profiles.size();
  for (const auto& p : profiles)
    for (int k = 0; k < kSlotsPerDay; ++k) agg.sum[k] += p[k];
  for (int k = 0; k < kSlotsPerDay; ++k)
    agg.mean[k] = agg.sum[k] / static_cast<double>(agg.count);
  return agg;
}

ValidationReport validate_profiles(
    const std::vector<std::array<double, kSlotsPerDay>>& observed,
    const std::vector<std::array<double, kSlotsPerDay>>& synthetic,
    const std::vector<std::vector<double>>& synthetic_series,
    const std::vector<int>& lags) {
  ValidationReport report;
  report.observed_profiles = observed.size();
  report.synthetic_profiles = synthetic.size();
  const auto obs = aggregate(observed);
  const auto syn = aggregate(synthetic);
  report.mae = mean_absolute_error_percent(obs.mean, syn.mean);
  report.max_error = max_absolute_error(obs.mean, syn.mean);
  for (int lag : lags) {
    double sum = 0.0;
    int used = 0;
    for (const auto& series : synthetic_series) {
      if (static_cast<int>(series.size()) <= lag) continue;
      try {
        sum += autocorrelation(series, lag);
        ++used;
      } catch (const Error&) {
        // zero-variance series: skip
      }
    }
    if (used > 0) report.autocorrelation_by_lag[lag] = sum / used;
  }
  return report;
}

}  // namespace prosyn
