#ifndef PROSYN_DATA_MODEL_HPP
#define PROSYN_DATA_MODEL_HPP

#include <cstdint>
#include <iosfwd>

#include "prosyn/types.hpp"

namespace prosyn {

// Maps CSV header names onto reading fields. generation may be empty
// (no generation column); feature_columns are carried through as
// per-customer labels.
struct CsvSchema {
  std::string customer_id = "customer_id";
  std::string timestamp = "timestamp";
  std::string demand = "demand_kwh";
  std::string generation = "generation_kwh";
  std::vector<std::string> feature_columns;
};

struct RowDiagnostic {
  std::size_t line = 0;
  std::string reason;
};

struct IngestResult {
  std::vector<CustomerTrace> traces;  // sorted by customer id
  std::vector<RowDiagnostic> rejected;
  std::size_t rows_total = 0;
};

// Reads a headered CSV of meter readings. Rows that violate the reading
// invariants (negative energy, unaligned or malformed timestamp) are
// rejected individually and reported; a missing mapped column is a schema
// error for the whole file.
IngestResult parse_meter_csv(std::istream& in, const CsvSchema& schema);

// kWh -> state index: round-half-up(kwh * 100), clamped to n_max.
int discretize_energy(double kwh, int n_max);

// State index -> kWh at the bin center.
double undiscretize(int state);

struct SplitResult {
  std::vector<DailyProfile> profiles;
  std::size_t dropped_days = 0;
  std::size_t dropped_readings = 0;
  std::size_t duplicate_readings = 0;
  std::size_t partial_generation_days = 0;
};

// Slices a trace into complete 48-slot days tagged with their day type.
// Days with missing slots are dropped and counted; duplicate (date, slot)
// readings keep the first occurrence. A day keeps its generation column
// only when all 48 slots have one.
SplitResult split_days(const CustomerTrace& trace, const Calendar& calendar);

// A 48-slot day chain with explicit probabilities, used to generate
// synthetic ground-truth datasets. transition[k] is row-major n x n and
// governs the move into slot k; slot 0 rows condition on the previous
// day's last state. initial seeds slot 0 of a fresh trajectory.
struct MarkovDayChain {
  int n_states = 0;
  std::vector<double> initial;
  std::array<std::vector<double>, kSlotsPerDay> transition;

  double prob(int slot, int from, int to) const {
    return transition[slot][static_cast<std::size_t>(from) * n_states + to];
  }
  // Throws Error(domain) if any row or the initial vector is unnormalized.
  void validate() const;
};

// Samples `customers` x `days` complete days exactly from the chain.
// warmup_days are simulated and discarded first so every kept day's
// slot-0 transition is conditioned on a real predecessor. Deterministic
// in `seed`; customer ids are C0001, C0002, ...
std::vector<DailyProfile> generate_ground_truth(const MarkovDayChain& chain,
                                                int customers, int days,
                                                std::uint64_t seed,
                                                Date start_date,
                                                const Calendar& calendar,
                                                int warmup_days = 1);

}  // namespace prosyn

#endif
