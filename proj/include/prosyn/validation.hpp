#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "prosyn/demand_chain.hpp"
#include "prosyn/types.hpp"

namespace prosyn {

struct MaxErrorResult {
  double value = 0.0;
  int slot = 1;  // 1-based; ties resolve to the earliest slot
};

struct MaeResult {
  double percent = 0.0;
  int slots_used = 0;      // slots entering the average
  int slots_excluded = 0;  // observed-zero slots left out
};

// Mean absolute relative error between two mean profiles, in percent.
// Slots where the observed value is 0 cannot be scored (division by the
// observed value) and are excluded but counted; all-zero observed input is
// an error.
MaeResult mean_absolute_error_percent(std::span<const double> observed,
                                      std::span<const double> synthetic);

MaxErrorResult max_absolute_error(std::span<const double> observed,
                                  std::span<const double> synthetic);

// Lag-n autocorrelation using the full-series mean and sample variance:
// R = sum_t (x_t - mean)(x_{t+n} - mean) / ((N - n) * s^2).
double autocorrelation(std::span<const double> series, int lag);

// Window of a slot's transition counts: rows are from-states lo..hi,
// columns to-states lo..hi.
std::vector<std::vector<double>> counts_window(const TransitionTensor& tensor,
                                               int slot, int lo, int hi);

// log10(count + 1) per cell, mapping empty cells to 0 and keeping the
// transform monotone in the counts.
std::vector<std::vector<double>> log_heatmap(
    const std::vector<std::vector<double>>& counts);

struct AggregateProfiles {
  std::array<double, kSlotsPerDay> mean{};
  std::array<double, kSlotsPerDay> sum{};
  std::size_t count = 0;
};

AggregateProfiles aggregate(
    const std::vector<std::array<double, kSlotsPerDay>>& profiles);

struct ValidationReport {
  MaeResult mae;
  MaxErrorResult max_error;
  // lag -> mean of per-series autocorrelations (series shorter than the
  // lag, or with zero variance, are skipped; lags nobody qualifies for are
  // omitted).
  std::map<int, double> autocorrelation_by_lag;
  std::size_t observed_profiles = 0;
  std::size_t synthetic_profiles = 0;
};

// Compares mean profiles of two collections and scores lag
// autocorrelations over the supplied multi-day series (one per prosumer,
// days concatenated).
ValidationReport validate_profiles(
    const std::vector<std::array<double, kSlotsPerDay>>& observed,
    const std::vector<std::array<double, kSlotsPerDay>>& synthetic,
    const std::vector<std::vector<double>>& synthetic_series,
    const std::vector<int>& lags);

}  // namespace prosyn
