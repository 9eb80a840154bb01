#include "prosyn/demand_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prosyn {

namespace {

void check_slot(int slot) {
  if (slot < 0 || slot >= kSlotsPerDay)
    throw Error(ErrorKind::domain, "slot index out of range");
}

std::vector<double> cumulative_of(const std::vector<double>& p) {
  std::vector<double> cum(p);
  for (std::size_t j = 1; j < cum.size(); ++j) cum[j] += cum[j - 1];
  return cum;
}

}  // namespace

void TransitionTensor::add(int slot, int from, int to, double weight) {
  check_slot(slot);
  if (from < 0 || from > n_max || to < 0 || to > n_max)
    throw Error(ErrorKind::domain, "state index out of range");
  if (weight < 0) throw Error(ErrorKind::domain, "negative count weight");
  counts[slot][{from, to}] += weight;
}

bool TransitionTensor::row_empty(int slot, int from) const {
  check_slot(slot);
  const auto& m = counts[slot];
  auto it = m.lower_bound({from, 0});
  return it == m.end() || it->first.first != from;
}

std::vector<double> TransitionTensor::row_counts(int slot, int from) const {
  check_slot(slot);
  std::vector<double> row(static_cast<std::size_t>(n_max) + 1, 0.0);
  const auto& m = counts[slot];
  for (auto it = m.lower_bound({from, 0});
       it != m.end() && it->first.first == from; ++it)
    row[it->first.second] = it->second;
  return row;
}

std::vector<double> TransitionTensor::destination_marginal(int slot) const {
  check_slot(slot);
  std::vector<double> col(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (const auto& [key, c] : counts[slot]) col[key.second] += c;
  return col;
}

double TransitionTensor::slot_total(int slot) const {
  check_slot(slot);
  double total = 0.0;
  for (const auto& [key, c] : counts[slot]) total += c;
  return total;
}

std::size_t TransitionTensor::transition_count() const {
  std::size_t n = 0;
  for (const auto& m : counts) n += m.size();
  return n;
}

TransitionTensor& TransitionTensor::merge(const TransitionTensor& other) {
  if (other.n_max != n_max || other.day_type != day_type)
    throw Error(ErrorKind::domain, "cannot merge tensors with different shape");
  for (int k = 0; k < kSlotsPerDay; ++k)
    for (const auto& [key, c] : other.counts[k]) counts[k][key] += c;
  source_population += other.source_population;
  return *this;
}

TransitionTensor build_tensor(const std::vector<DailyProfile>& profiles,
                              DayType day_type, int n_max) {
  if (n_max < 0) throw Error(ErrorKind::domain, "n_max must be nonnegative");
  TransitionTensor tensor;
  tensor.n_max = n_max;
  tensor.day_type = day_type;

  // Previous-day lookup spans the whole input, regardless of day type: a
  // weekday's first transition may legitimately leave a weekend state.
  std::map<std::pair<std::string, Date>, const DailyProfile*> by_day;
  for (const auto& p : profiles)
    by_day.emplace(std::pair{p.customer_id, p.date}, &p);

  std::set<std::string> customers;
  for (const auto& p : profiles) {
    if (p.day_type != day_type) continue;
    customers.insert(p.customer_id);
    std::array<int, kSlotsPerDay> s;
    for (int k = 0; k < kSlotsPerDay; ++k)
      s[k] = discretize_energy(p.demand_kwh[k], n_max);
    int from0 = s[0];
    auto prev = by_day.find({p.customer_id, p.date - std::chrono::days{1}});
    if (prev != by_day.end())
      from0 =
          discretize_energy(prev->second->demand_kwh[kSlotsPerDay - 1], n_max);
    tensor.add(0, from0, s[0]);
    for (int k = 1; k < kSlotsPerDay; ++k) tensor.add(k, s[k - 1], s[k]);
  }
  tensor.source_population = customers.size();
  return tensor;
}

SmoothedRow kde_row(const std::vector<double>& counts, double h) {
  if (!(h > 0)) throw Error(ErrorKind::config, "bandwidth must be positive");
  if (counts.empty()) throw Error(ErrorKind::domain, "empty state space");
  const double inv = 1.0 / (2.0 * h * h);
  SmoothedRow row;
  row.bandwidth = h;
  row.p.assign(counts.size(), 0.0);
  bool any = false;
  for (std::size_t src = 0; src < counts.size(); ++src) {
    const double c = counts[src];
    if (c == 0.0) continue;
    if (c < 0.0) throw Error(ErrorKind::domain, "negative count");
    any = true;
    for (std::size_t j = 0; j < row.p.size(); ++j) {
      const double d = static_cast<double>(j) - static_cast<double>(src);
      row.p[j] += c * std::exp(-d * d * inv);
    }
  }
  if (!any)
    throw Error(ErrorKind::domain, "cannot smooth an all-zero row");
  // Keep every state attainable: distant states underflow to exactly 0, so
  // lift them to the smallest normal double before normalizing.
  double sum = 0.0;
  for (double& v : row.p) {
    if (v < std::numeric_limits<double>::min())
      v = std::numeric_limits<double>::min();
    sum += v;
  }
  for (double& v : row.p) v /= sum;
  return row;
}

std::vector<double> kde_per_kernel_mass(const std::vector<double>& counts,
                                        double h) {
  if (!(h > 0)) throw Error(ErrorKind::config, "bandwidth must be positive");
  std::vector<double> out(counts.size(), 0.0);
  const double inv = 1.0 / (2.0 * h * h);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    double num = 0.0, den = 0.0;
    for (std::size_t src = 0; src < counts.size(); ++src) {
      const double d = static_cast<double>(j) - static_cast<double>(src);
      const double k = std::exp(-d * d * inv);
      num += counts[src] * k;
      den += k;
    }
    out[j] = num / den;
  }
  return out;
}

SmoothedRow initial_distribution(const TransitionTensor& tensor, double h) {
  const auto marginal = tensor.destination_marginal(0);
  bool any = false;
  for (double c : marginal)
    if (c > 0) any = true;
  if (!any)
    throw Error(ErrorKind::domain,
                "no first-slot transitions: cannot build initial distribution");
  return kde_row(marginal, h);
}

ChainModel::ChainModel(TransitionTensor tensor, double bandwidth)
    : tensor_(std::move(tensor)), h_(bandwidth) {
  if (!(h_ > 0)) throw Error(ErrorKind::config, "bandwidth must be positive");
  initial_cum_ = cumulative_of(initial_distribution(tensor_, h_).p);
  for (int k = 0; k < kSlotsPerDay; ++k)
    if (tensor_.counts[k].empty())
      throw Error(ErrorKind::domain, "tensor has an empty slot matrix");
}

const std::vector<double>& ChainModel::fallback_cumulative(int slot) const {
  auto& cached = fallback_cum_[slot];
  if (cached.empty())
    cached = cumulative_of(kde_row(tensor_.destination_marginal(slot), h_).p);
  return cached;
}

std::span<const double> ChainModel::row_cumulative(int slot, int from) const {
  check_slot(slot);
  if (from < 0 || from > tensor_.n_max)
    throw Error(ErrorKind::domain, "state index out of range");
  if (tensor_.row_empty(slot, from)) return fallback_cumulative(slot);
  auto& slot_cache = row_cum_cache_[slot];
  auto it = slot_cache.find(from);
  if (it == slot_cache.end())
    it = slot_cache
             .emplace(from,
                      cumulative_of(kde_row(tensor_.row_counts(slot, from), h_).p))
             .first;
  return it->second;
}

std::vector<double> ChainModel::row_probabilities(int slot, int from) const {
  const auto cum = row_cumulative(slot, from);
  std::vector<double> p(cum.size());
  double prev = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = std::max(cum[j] - prev, 0.0);
    prev = cum[j];
  }
  return p;
}

double ChainModel::observed_row_total(int slot, int from) const {
  check_slot(slot);
  double total = 0.0;
  const auto& m = tensor_.counts[slot];
  for (auto it = m.lower_bound({from, 0});
       it != m.end() && it->first.first == from; ++it)
    total += it->second;
  return total;
}

std::array<int, kSlotsPerDay> ChainModel::sample_day_states(
    RngStream& rng, int prev_last_state) const {
  std::array<int, kSlotsPerDay> states;
  int s = prev_last_state;
  for (int k = 0; k < kSlotsPerDay; ++k) {
    if (k == 0 && s < 0)
      s = static_cast<int>(categorical_draw(initial_cum_, rng));
    else
      s = static_cast<int>(categorical_draw(row_cumulative(k, s), rng));
    states[k] = s;
  }
  return states;
}

DailyProfile sample_day(const TransitionTensor& tensor, double h,
                        RngStream& rng) {
  ChainModel model(tensor, h);
  return profile_from_states(model.sample_day_states(rng), tensor.day_type);
}

DailyProfile profile_from_states(const std::array<int, kSlotsPerDay>& states,
                                 DayType day_type) {
  DailyProfile p;
  p.day_type = day_type;
  for (int k = 0; k < kSlotsPerDay; ++k)
    p.demand_kwh[k] = undiscretize(states[k]);
  return p;
}

PersonalizedChain::PersonalizedChain(std::shared_ptr<const ChainModel> model,
                                     std::string prosumer_id,
                                     double concentration_scale,
                                     std::uint64_t draw_seed)
    : model_(std::move(model)),
      id_(std::move(prosumer_id)),
      scale_(concentration_scale),
      seed_(draw_seed) {
  if (!model_) throw Error(ErrorKind::domain, "personalized chain needs a model");
  if (scale_ < 0)
    throw Error(ErrorKind::config, "concentration scale must be nonnegative");
}

std::vector<double>& PersonalizedChain::pseudo_row(int slot, int from) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(slot) << 32) | static_cast<std::uint32_t>(from);
  auto it = rows_.find(key);
  if (it != rows_.end()) return it->second;

  const auto base = model_->row_probabilities(slot, from);
  double mass = scale_;
  if (mass == 0.0)
    mass = std::max(1.0, model_->observed_row_total(slot, from));

  // Deterministic per-row stream: visiting rows in a different order does
  // not change what any row looks like.
  RngStream row_rng(mix_u64(seed_ ^ key));
  std::vector<double> pseudo(base.size(), 0.0);
  double sum = 0.0;
  for (std::size_t j = 0; j < base.size(); ++j) {
    pseudo[j] = row_rng.gamma(mass * base[j]);
    sum += pseudo[j];
  }
  if (sum <= 0.0) {
    pseudo = base;  // vanishing-probability numeric guard
    sum = 1.0;
  }
  const double rescale = mass / sum;
  for (double& v : pseudo) v *= rescale;
  return rows_.emplace(key, std::move(pseudo)).first->second;
}

std::vector<double> PersonalizedChain::row_probabilities(int slot, int from) {
  std::vector<double> p = pseudo_row(slot, from);
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return p;
}

std::vector<std::array<int, kSlotsPerDay>> PersonalizedChain::sample_days(
    int days, double reinforcement_weight, RngStream& rng) {
  if (days < 1) throw Error(ErrorKind::domain, "need at least one day");
  if (reinforcement_weight < 0)
    throw Error(ErrorKind::domain, "reinforcement weight must be nonnegative");
  std::vector<std::array<int, kSlotsPerDay>> out;
  out.reserve(days);
  std::vector<double> cum;
  int s = -1;
  for (int d = 0; d < days; ++d) {
    std::array<int, kSlotsPerDay> day;
    for (int k = 0; k < kSlotsPerDay; ++k) {
      if (d == 0 && k == 0) {
        s = static_cast<int>(
            categorical_draw(model_->initial_cumulative(), rng));
      } else {
        auto& row = pseudo_row(k, s);
        cum.assign(row.begin(), row.end());
        for (std::size_t j = 1; j < cum.size(); ++j) cum[j] += cum[j - 1];
        const int next = static_cast<int>(categorical_draw(cum, rng));
        row[next] += reinforcement_weight;
        s = next;
      }
      day[k] = s;
    }
    out.push_back(day);
  }
  return out;
}

PersonalizedChain personalize(std::shared_ptr<const ChainModel> model,
                              std::string prosumer_id,
                              double concentration_scale, RngStream& rng) {
  return PersonalizedChain(std::move(model), std::move(prosumer_id),
                           concentration_scale, rng.next_u64());
}

PersonalizedChain personalize(const TransitionTensor& tensor, double h,
                              double concentration_scale, RngStream& rng) {
  return personalize(std::make_shared<ChainModel>(tensor, h), "",
                     concentration_scale, rng);
}

std::vector<std::array<int, kSlotsPerDay>> sample_multiday(
    PersonalizedChain& chain, int days, double reinforcement_weight,
    RngStream& rng) {
  return chain.sample_days(days, reinforcement_weight, rng);
}

}  // namespace prosyn
