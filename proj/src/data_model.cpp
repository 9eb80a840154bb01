#include "prosyn/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <sstream>

#include "prosyn/rng.hpp"

namespace prosyn {

const char* to_string(DayType t) {
  return t == DayType::weekday ? "weekday" : "weekend";
}

DayType day_type_from_string(const std::string& s) {
  if (s == "weekday") return DayType::weekday;
  if (s == "weekend") return DayType::weekend;
  throw Error(ErrorKind::parse, "unknown day type: " + s);
}

Date parse_date(const std::string& s) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3)
    throw Error(ErrorKind::parse, "malformed date: " + s);
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) throw Error(ErrorKind::parse, "invalid date: " + s);
  return std::chrono::sys_days{ymd};
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

DayType Calendar::day_type(Date d) const {
  if (all_weekday) return DayType::weekday;
  if (holidays.count(d)) return DayType::weekend;
  const std::chrono::weekday wd{d};
  return (wd == std::chrono::Saturday || wd == std::chrono::Sunday)
             ? DayType::weekend
             : DayType::weekday;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

// Accepts "YYYY-MM-DD HH:MM[:SS]" with 'T' or space. Readings must sit on
// a half-hour boundary.
bool parse_timestamp(const std::string& s, Date& date, int& slot,
                     std::string& reason) {
  int y = 0, hh = -1, mm = -1, ss = 0;
  unsigned mo = 0, dd = 0;
  char sep = 0;
  int n = std::sscanf(s.c_str(), "%4d-%2u-%2u%c%2d:%2d:%2d", &y, &mo, &dd,
                      &sep, &hh, &mm, &ss);
  if (n < 6 || (sep != 'T' && sep != ' ')) {
    reason = "malformed timestamp";
    return false;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                  std::chrono::day{dd}};
  if (!ymd.ok() || hh < 0 || hh > 23 || mm < 0 || mm > 59) {
    reason = "invalid timestamp";
    return false;
  }
  if ((mm != 0 && mm != 30) || ss != 0) {
    reason = "timestamp not aligned to 30 minutes";
    return false;
  }
  date = std::chrono::sys_days{ymd};
  slot = hh * 2 + (mm == 30 ? 1 : 0);
  return true;
}

}  // namespace

IngestResult parse_meter_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::parse, "empty CSV: no header row");
  const auto header = split_csv_line(line);

  auto column = [&](const std::string& name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : int(it - header.begin());
  };
  const int col_id = column(schema.customer_id);
  const int col_ts = column(schema.timestamp);
  const int col_demand = column(schema.demand);
  if (col_id < 0 || col_ts < 0 || col_demand < 0)
    throw Error(ErrorKind::config,
                "schema error: missing mapped column in CSV header");
  int col_gen = -1;
  if (!schema.generation.empty()) col_gen = column(schema.generation);
  std::vector<std::pair<std::string, int>> feature_cols;
  for (const auto& name : schema.feature_columns) {
    int c = column(name);
    if (c < 0)
      throw Error(ErrorKind::config,
                  "schema error: missing feature column " + name);
    feature_cols.emplace_back(name, c);
  }

  IngestResult result;
  std::map<std::string, CustomerTrace> by_customer;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    ++result.rows_total;
    const auto fields = split_csv_line(line);
    auto reject = [&](const std::string& reason) {
      result.rejected.push_back({line_no, reason});
    };
    const int max_col = std::max(
        {col_id, col_ts, col_demand, col_gen < 0 ? 0 : col_gen});
    if (int(fields.size()) <= max_col) {
      reject("too few fields");
      continue;
    }
    const std::string& id = fields[col_id];
    if (id.empty()) {
      reject("empty customer id");
      continue;
    }
    MeterReading r;
    std::string reason;
    if (!parse_timestamp(fields[col_ts], r.date, r.slot, reason)) {
      reject(reason);
      continue;
    }
    if (!parse_double(fields[col_demand], r.demand_kwh)) {
      reject("malformed demand value");
      continue;
    }
    if (r.demand_kwh < 0) {
      reject("negative demand");
      continue;
    }
    if (col_gen >= 0 && !fields[col_gen].empty()) {
      double g;
      if (!parse_double(fields[col_gen], g)) {
        reject("malformed generation value");
        continue;
      }
      if (g < 0) {
        reject("negative generation");
        continue;
      }
      r.generation_kwh = g;
    }
    auto& trace = by_customer[id];
    trace.customer_id = id;
    trace.readings.push_back(r);
    for (const auto& [name, c] : feature_cols)
      if (int(fields.size()) > c && !fields[c].empty())
        trace.labels[name] = fields[c];
  }

  for (auto& [id, trace] : by_customer) {
    std::stable_sort(trace.readings.begin(), trace.readings.end(),
                     [](const MeterReading& a, const MeterReading& b) {
                       return a.date != b.date ? a.date < b.date
                                               : a.slot < b.slot;
                     });
    result.traces.push_back(std::move(trace));
  }
  return result;
}

int discretize_energy(double kwh, int n_max) {
  if (!(kwh >= 0))
    throw Error(ErrorKind::domain, "demand must be nonnegative");
  const double scaled = std::floor(kwh * 100.0 + 0.5);
  if (scaled >= n_max) return n_max;
  return static_cast<int>(scaled);
}

double undiscretize(int state) { return state / 100.0; }

SplitResult split_days(const CustomerTrace& trace, const Calendar& calendar) {
  SplitResult out;
  std::map<Date, std::array<const MeterReading*, kSlotsPerDay>> days;
  std::map<Date, std::size_t> day_counts;
  for (const auto& r : trace.readings) {
    auto& slots = days[r.date];
    if (day_counts[r.date] == 0) slots.fill(nullptr);
    if (slots[r.slot] != nullptr) {
      ++out.duplicate_readings;
      continue;
    }
    slots[r.slot] = &r;
    ++day_counts[r.date];
  }
  for (const auto& [date, slots] : days) {
    const std::size_t count = day_counts[date];
    if (count < kSlotsPerDay) {
      ++out.dropped_days;
      out.dropped_readings += count;
      continue;
    }
    DailyProfile p;
    p.customer_id = trace.customer_id;
    p.date = date;
    p.day_type = calendar.day_type(date);
    bool all_gen = true;
    bool any_gen = false;
    std::array<double, kSlotsPerDay> gen{};
    for (int k = 0; k < kSlotsPerDay; ++k) {
      p.demand_kwh[k] = slots[k]->demand_kwh;
      if (slots[k]->generation_kwh) {
        any_gen = true;
        gen[k] = *slots[k]->generation_kwh;
      } else {
        all_gen = false;
      }
    }
    if (all_gen)
      p.generation_kwh = gen;
    else if (any_gen)
      ++out.partial_generation_days;
    out.profiles.push_back(std::move(p));
  }
  return out;
}

void MarkovDayChain::validate() const {
  if (n_states <= 0)
    throw Error(ErrorKind::domain, "chain must have at least one state");
  auto check_row = [&](const std::vector<double>& row, std::size_t offset,
                       const char* what) {
    double sum = 0;
    for (int j = 0; j < n_states; ++j) {
      const double p = row[offset + j];
      if (!(p >= 0))
        throw Error(ErrorKind::domain,
                    std::string(what) + ": negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error(ErrorKind::domain,
                  std::string(what) + ": row does not sum to 1");
  };
  check_row(initial, 0, "initial distribution");
  for (int k = 0; k < kSlotsPerDay; ++k)
    for (int i = 0; i < n_states; ++i)
      check_row(transition[k], static_cast<std::size_t>(i) * n_states,
                "transition row");
}

std::vector<DailyProfile> generate_ground_truth(const MarkovDayChain& chain,
                                                int customers, int days,
                                                std::uint64_t seed,
                                                Date start_date,
                                                const Calendar& calendar,
                                                int warmup_days) {
  chain.validate();
  if (customers < 0 || days <= 0 || warmup_days < 0)
    throw Error(ErrorKind::domain, "invalid ground-truth dimensions");

  // Precompute cumulative rows once; sampling then only needs upper_bound.
  const int n = chain.n_states;
  std::vector<double> initial_cum(chain.initial.begin(), chain.initial.end());
  for (int j = 1; j < n; ++j) initial_cum[j] += initial_cum[j - 1];
  std::array<std::vector<double>, kSlotsPerDay> cum;
  for (int k = 0; k < kSlotsPerDay; ++k) {
    cum[k] = chain.transition[k];
    for (int i = 0; i < n; ++i)
      for (int j = 1; j < n; ++j)
        cum[k][static_cast<std::size_t>(i) * n + j] +=
            cum[k][static_cast<std::size_t>(i) * n + j - 1];
  }

  RngStream root(seed);
  std::vector<DailyProfile> out;
  out.reserve(static_cast<std::size_t>(customers) * days);
  for (int c = 0; c < customers; ++c) {
    RngStream rng = root.substream(static_cast<std::uint64_t>(c + 1));
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "C%04d", c + 1);
    int prev_state = -1;
    for (int d = -warmup_days; d < days; ++d) {
      DailyProfile p;
      p.customer_id = idbuf;
      p.date = start_date + std::chrono::days{d};
      p.day_type = calendar.day_type(p.date);
      int state = prev_state;
      for (int k = 0; k < kSlotsPerDay; ++k) {
        if (k == 0 && state < 0) {
          state = static_cast<int>(categorical_draw(initial_cum, rng));
        } else {
          std::span<const double> row{
              cum[k].data() + static_cast<std::size_t>(state) * n,
              static_cast<std::size_t>(n)};
          state = static_cast<int>(categorical_draw(row, rng));
        }
        p.demand_kwh[k] = undiscretize(state);
      }
      prev_state = state;
      if (d >= 0) out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace prosyn
