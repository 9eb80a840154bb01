#ifndef PROSYN_TYPES_HPP
#define PROSYN_TYPES_HPP

#include <array>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace prosyn {

inline constexpr int kSlotsPerDay = 48;
inline constexpr int kDefaultMaxState = 700;

enum class ErrorKind { io, parse, domain, config };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

enum class DayType { weekday, weekend };

const char* to_string(DayType t);
DayType day_type_from_string(const std::string& s);

using Date = std::chrono::sys_days;

// "YYYY-MM-DD"; throws Error(parse) on malformed input.
Date parse_date(const std::string& s);
std::string format_date(Date d);

// One half-hourly meter reading. slot 0 covers 00:00-00:30.
struct MeterReading {
  Date date;
  int slot = 0;
  double demand_kwh = 0.0;
  std::optional<double> generation_kwh;
};

struct CustomerTrace {
  std::string customer_id;
  std::vector<MeterReading> readings;  // sorted by (date, slot)
  std::map<std::string, std::string> labels;  // extra categorical columns
};

// One complete midnight-to-midnight day of readings.
struct DailyProfile {
  std::string customer_id;
  Date date{};
  DayType day_type = DayType::weekday;
  std::array<double, kSlotsPerDay> demand_kwh{};
  std::optional<std::array<double, kSlotsPerDay>> generation_kwh;
};

// Weekend/holiday calendar. all_weekday forces every date to weekday,
// which synthetic single-chain datasets use.
struct Calendar {
  std::set<Date> holidays;
  bool all_weekday = false;

  DayType day_type(Date d) const;
};

// A set of synthesized multi-day profiles: values laid out prosumer-major,
// then day, then slot (ids.size() * days * 48 entries).
struct ProfileSet {
  std::vector<std::string> ids;
  int days = 1;
  std::vector<double> values;

  std::size_t size() const { return ids.size(); }
  std::size_t series_length() const {
    return static_cast<std::size_t>(days) * kSlotsPerDay;
  }
  std::span<const double> profile(std::size_t i) const {
    return {values.data() + i * series_length(), series_length()};
  }
  std::span<double> profile(std::size_t i) {
    return {values.data() + i * series_length(), series_length()};
  }
};

}  // namespace prosyn

#endif
