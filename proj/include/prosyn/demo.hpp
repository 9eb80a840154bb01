#pragma once

#include <cstdint>
#include <string>

#include "prosyn/data_model.hpp"
#include "prosyn/solar_gen.hpp"

namespace prosyn::demo {

// Reference demand chain over states 0..60 (0.00-0.60 kWh per half hour)
// with morning and evening peaks; rows pull the state toward a slot target
// with Gaussian spread. Serves as ground truth for round-trip tests and as
// the source of the bundled dataset.
MarkovDayChain demand_chain();

// Reference clearness chain: persistence along the diagonal plus extra
// mass pulled toward the fully-occluded and fully-clear endpoints.
ClearnessMatrix clearness_matrix();

// Panel geometry shared by the bundled dataset's site.
SolarConfig site_config();

struct DatasetOptions {
  int customers = 30;
  int days = 40;
  std::uint64_t seed = 1;
  std::string start_date = "2021-03-01";
  bool with_generation = true;
};

// Writes a raw half-hourly meter CSV (customer_id, timestamp, demand_kwh
// and, by default, generation_kwh) synthesized from the reference chains.
// Customers fall into three PV size tiers so capacity clustering has
// structure to find. Returns the number of data rows written.
std::size_t write_meter_csv(const std::string& path,
                            const DatasetOptions& options);

}  // namespace prosyn::demo
