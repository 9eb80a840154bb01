#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "prosyn/data_model.hpp"
#include "prosyn/rng.hpp"
#include "prosyn/types.hpp"

namespace prosyn {

// Default Gaussian kernel bandwidth in state-index units (0.02 kWh):
// wide enough to bridge the 0.01 kWh quantization, narrow enough to keep
// multi-modal row structure.
inline constexpr double kDefaultBandwidth = 2.0;

// Per-slot transition counts between discretized demand states. Slot k
// holds (state at slot k-1, state at slot k) pairs; slot 0 pairs come from
// the previous day's last slot when that day is present for the same
// customer, else the day's first state paired with itself.
struct TransitionTensor {
  int n_max = kDefaultMaxState;
  DayType day_type = DayType::weekday;
  std::size_t source_population = 0;  // distinct customers counted
  std::array<std::map<std::pair<int, int>, double>, kSlotsPerDay> counts;

  void add(int slot, int from, int to, double weight = 1.0);
  bool row_empty(int slot, int from) const;
  std::vector<double> row_counts(int slot, int from) const;  // length n_max+1
  std::vector<double> destination_marginal(int slot) const;  // column sums
  double slot_total(int slot) const;
  std::size_t transition_count() const;

  // Additive merge; operands must agree on n_max and day_type.
  TransitionTensor& merge(const TransitionTensor& other);
};

TransitionTensor build_tensor(const std::vector<DailyProfile>& profiles,
                              DayType day_type, int n_max = kDefaultMaxState);

// A probability vector over states 0..n_max, strictly positive everywhere.
struct SmoothedRow {
  std::vector<double> p;
  double bandwidth = 0.0;
};

// Gaussian-kernel smoothing of a count row, normalized to sum to 1. A tiny
// positive floor is applied before normalizing so far-away states survive
// double underflow (they land subnormal, still > 0). Throws a domain error
// on an all-zero row; callers use that to trigger the fallback row.
SmoothedRow kde_row(const std::vector<double>& counts, double h);

// Pointwise variant dividing kernel-weighted counts by the plain kernel
// mass at each state instead of normalizing the row; the result need not
// sum to 1. Kept for comparison against sources defining it this way.
std::vector<double> kde_per_kernel_mass(const std::vector<double>& counts,
                                        double h);

// Distribution of the first state of a day: destination marginal of the
// slot-0 matrix, smoothed.
SmoothedRow initial_distribution(const TransitionTensor& tensor, double h);

// Sampling view over a tensor: smoothed rows are built lazily and cached
// as cumulative vectors. Rows with no observed counts fall back to the
// slot's smoothed destination marginal so sampling always progresses.
// Instances are not thread-safe (lazy cache); use one per thread.
class ChainModel {
 public:
  explicit ChainModel(TransitionTensor tensor,
                      double bandwidth = kDefaultBandwidth);

  int n_states() const { return tensor_.n_max + 1; }
  double bandwidth() const { return h_; }
  DayType day_type() const { return tensor_.day_type; }
  const TransitionTensor& tensor() const { return tensor_; }

  std::span<const double> initial_cumulative() const { return initial_cum_; }
  std::span<const double> row_cumulative(int slot, int from) const;
  std::vector<double> row_probabilities(int slot, int from) const;
  double observed_row_total(int slot, int from) const;

  // One day of states. prev_last_state < 0 draws the first state from the
  // initial distribution; otherwise slot 0 transitions out of that state.
  std::array<int, kSlotsPerDay> sample_day_states(
      RngStream& rng, int prev_last_state = -1) const;

 private:
  const std::vector<double>& fallback_cumulative(int slot) const;

  TransitionTensor tensor_;
  double h_;
  std::vector<double> initial_cum_;
  mutable std::array<std::map<int, std::vector<double>>, kSlotsPerDay>
      row_cum_cache_;
  mutable std::array<std::vector<double>, kSlotsPerDay> fallback_cum_;
};

// Convenience single-shot sampler; bulk callers should hold a ChainModel.
DailyProfile sample_day(const TransitionTensor& tensor, double h,
                        RngStream& rng);

DailyProfile profile_from_states(const std::array<int, kSlotsPerDay>& states,
                                 DayType day_type);

// Per-prosumer chain: every row it touches is replaced, on first use, by a
// draw from Dirichlet(mass * smoothed row), where mass is the row's
// observed count total (min 1) or a fixed override. Rows are stored as
// pseudo-counts forming an urn: sampling a transition adds the
// reinforcement weight back to the sampled entry, so trajectories this
// prosumer has taken become likelier. Row draws are seeded by (chain seed,
// slot, row), so the set of rows visited does not perturb their contents.
class PersonalizedChain {
 public:
  PersonalizedChain(std::shared_ptr<const ChainModel> model,
                    std::string prosumer_id, double concentration_scale,
                    std::uint64_t draw_seed);

  const std::string& prosumer_id() const { return id_; }
  const ChainModel& model() const { return *model_; }

  // Normalized copy of the urn row (materializing it if needed).
  std::vector<double> row_probabilities(int slot, int from);

  // `days` consecutive days of states; each sampled transition adds
  // `reinforcement_weight` to its row's pseudo-counts. Day 1's first state
  // comes from the initial distribution; later days chain through slot 0.
  std::vector<std::array<int, kSlotsPerDay>> sample_days(
      int days, double reinforcement_weight, RngStream& rng);

 private:
  std::vector<double>& pseudo_row(int slot, int from);

  std::shared_ptr<const ChainModel> model_;
  std::string id_;
  double scale_;  // 0: per-row observed total
  std::uint64_t seed_;
  std::map<std::uint64_t, std::vector<double>> rows_;
};

// concentration_scale == 0 uses each row's observed count total (min 1) as
// the Dirichlet mass; a positive value fixes one mass for every row.
PersonalizedChain personalize(std::shared_ptr<const ChainModel> model,
                              std::string prosumer_id,
                              double concentration_scale, RngStream& rng);
PersonalizedChain personalize(const TransitionTensor& tensor, double h,
                              double concentration_scale, RngStream& rng);

std::vector<std::array<int, kSlotsPerDay>> sample_multiday(
    PersonalizedChain& chain, int days, double reinforcement_weight,
    RngStream& rng);

}  // namespace prosyn
