#include "prosyn/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prosyn/rng.hpp"

namespace prosyn::io {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open for reading: " + path);
  return in;
}

// Shortest round-trip decimal form, so rereading a file reproduces the
// exact doubles and rewriting reproduces the exact bytes.
std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorKind::io, "number formatting failed");
  return std::string(buf, end);
}

double parse_number(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* first = s.c_str();
  const char* last = first + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw Error(ErrorKind::parse, "bad number '" + s + "' in " + context);
  return v;
}

long parse_int(const std::string& s, const std::string& context) {
  long v = 0;
  const char* first = s.c_str();
  const char* last = first + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw Error(ErrorKind::parse, "bad integer '" + s + "' in " + context);
  return v;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

json load_json(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, "bad JSON in " + path + ": " + e.what());
  }
  return j;
}

void dump_json(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

struct TripletFile {
  std::map<std::string, std::string> metadata;
  // slot (1-based), from, to, count
  std::vector<std::tuple<int, int, int, double>> rows;
};

TripletFile read_triplets(const std::string& path) {
  auto in = open_in(path);
  TripletFile file;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        std::string key = line.substr(1, colon - 1);
        std::string value = line.substr(colon + 1);
        auto trim = [](std::string& s) {
          s.erase(0, s.find_first_not_of(' '));
          s.erase(s.find_last_not_of(' ') + 1);
        };
        trim(key);
        trim(value);
        file.metadata[key] = value;
      }
      continue;
    }
    if (!header_seen) {
      if (line != "slot,from,to,count")
        throw Error(ErrorKind::parse, path + ": unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 4)
      throw Error(ErrorKind::parse,
                  path + ":" + std::to_string(line_no) + ": need 4 fields");
    const std::string ctx = path + ":" + std::to_string(line_no);
    file.rows.emplace_back(static_cast<int>(parse_int(f[0], ctx)),
                           static_cast<int>(parse_int(f[1], ctx)),
                           static_cast<int>(parse_int(f[2], ctx)),
                           parse_number(f[3], ctx));
  }
  if (!header_seen)
    throw Error(ErrorKind::parse, path + ": missing triplet header");
  return file;
}

}  // namespace

void write_profile_store(const std::string& path,
                         const std::vector<DailyProfile>& profiles) {
  auto out = open_out(path);
  bool any_gen = false;
  for (const auto& p : profiles)
    if (p.generation_kwh) any_gen = true;
  out << "customer_id,date,day_type";
  char col[8];
  for (int k = 0; k < kSlotsPerDay; ++k) {
    std::snprintf(col, sizeof col, ",d%02d", k);
    out << col;
  }
  if (any_gen)
    for (int k = 0; k < kSlotsPerDay; ++k) {
      std::snprintf(col, sizeof col, ",g%02d", k);
      out << col;
    }
  out << '\n';
  for (const auto& p : profiles) {
    out << p.customer_id << ',' << format_date(p.date) << ','
        << to_string(p.day_type);
    for (int k = 0; k < kSlotsPerDay; ++k) out << ',' << fmt(p.demand_kwh[k]);
    if (any_gen) {
      for (int k = 0; k < kSlotsPerDay; ++k) {
        out << ',';
        if (p.generation_kwh) out << fmt((*p.generation_kwh)[k]);
      }
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

std::vector<DailyProfile> read_profile_store(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::parse, path + ": empty store");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  const std::size_t base = 3 + kSlotsPerDay;
  const bool has_gen = header.size() == base + kSlotsPerDay;
  if (header.size() != base && !has_gen)
    throw Error(ErrorKind::parse, path + ": unexpected store header");

  std::vector<DailyProfile> profiles;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size())
      throw Error(ErrorKind::parse,
                  path + ":" + std::to_string(line_no) + ": field count");
    const std::string ctx = path + ":" + std::to_string(line_no);
    DailyProfile p;
    p.customer_id = f[0];
    p.date = parse_date(f[1]);
    p.day_type = day_type_from_string(f[2]);
    for (int k = 0; k < kSlotsPerDay; ++k)
      p.demand_kwh[k] = parse_number(f[3 + k], ctx);
    if (has_gen && !f[base].empty()) {
      std::array<double, kSlotsPerDay> gen;
      for (int k = 0; k < kSlotsPerDay; ++k)
        gen[k] = parse_number(f[base + k], ctx);
      p.generation_kwh = gen;
    }
    profiles.push_back(std::move(p));
  }
  return profiles;
}

void write_tensor(const std::string& path, const TransitionTensor& tensor,
                  const std::string& source_hash) {
  auto out = open_out(path);
  out << "# prosyn tensor v1\n";
  out << "# n_max: " << tensor.n_max << '\n';
  out << "# day_type: " << to_string(tensor.day_type) << '\n';
  out << "# population: " << tensor.source_population << '\n';
  if (!source_hash.empty()) out << "# source: " << source_hash << '\n';
  out << "slot,from,to,count\n";
  for (int k = 0; k < kSlotsPerDay; ++k)
    for (const auto& [key, c] : tensor.counts[k])
      out << (k + 1) << ',' << key.first << ',' << key.second << ','
          << fmt(c) << '\n';
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

TransitionTensor read_tensor(const std::string& path) {
  const auto file = read_triplets(path);
  TransitionTensor tensor;
  auto meta = file.metadata;
  if (auto it = meta.find("n_max"); it != meta.end())
    tensor.n_max = static_cast<int>(parse_int(it->second, path));
  if (auto it = meta.find("day_type"); it != meta.end())
    tensor.day_type = day_type_from_string(it->second);
  if (auto it = meta.find("population"); it != meta.end())
    tensor.source_population =
        static_cast<std::size_t>(parse_int(it->second, path));
  for (const auto& [slot, from, to, count] : file.rows) {
    if (slot < 1 || slot > kSlotsPerDay)
      throw Error(ErrorKind::parse, path + ": slot out of range");
    tensor.add(slot - 1, from, to, count);
  }
  return tensor;
}

void write_ci_matrix(const std::string& path, const ClearnessMatrix& matrix,
                     const std::string& source_hash) {
  auto out = open_out(path);
  out << "# prosyn ci matrix v1\n";
  out << "# ci_states: " << kCiStates << '\n';
  if (!source_hash.empty()) out << "# source: " << source_hash << '\n';
  out << "slot,from,to,count\n";
  for (int i = 0; i < kCiStates; ++i)
    for (int j = 0; j < kCiStates; ++j) {
      const double c = matrix.count(i, j);
      if (c != 0.0) out << "1," << i << ',' << j << ',' << fmt(c) << '\n';
    }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

ClearnessMatrix read_ci_matrix(const std::string& path) {
  const auto file = read_triplets(path);
  if (auto it = file.metadata.find("ci_states");
      it != file.metadata.end() && parse_int(it->second, path) != kCiStates)
    throw Error(ErrorKind::parse, path + ": unsupported ci state count");
  ClearnessMatrix matrix;
  for (const auto& [slot, from, to, count] : file.rows) {
    if (slot != 1)
      throw Error(ErrorKind::parse, path + ": ci matrix must be single-slot");
    matrix.add(from, to, count);
  }
  return matrix;
}

void write_cluster_model(const std::string& path, const ClusterModel& model,
                         const ClusterFitMeta& meta) {
  json clusters = json::array();
  for (const auto& c : model.clusters)
    clusters.push_back({{"mean", c.mean},
                        {"variance", c.variance},
                        {"population", c.population}});
  json j{{"clusters", clusters},
         {"total_population", model.total_population()},
         {"error_square_sum", model.within_square_sum},
         {"error_abs_sum", model.within_abs_sum},
         {"objective", model.objective},
         {"fit",
          {{"method", meta.method},
           {"prior_mean", meta.prior_mean},
           {"prior_variance", meta.prior_variance},
           {"new_cluster_variance", meta.new_cluster_variance},
           {"concentration", meta.concentration},
           {"sweeps", model.sweeps},
           {"converged", model.converged}}}};
  dump_json(path, j);
}

ClusterModel read_cluster_model(const std::string& path, ClusterFitMeta* meta) {
  const json j = load_json(path);
  ClusterModel model;
  try {
    for (const auto& c : j.at("clusters")) {
      Cluster cluster;
      cluster.mean = c.at("mean").get<double>();
      cluster.variance = c.at("variance").get<double>();
      cluster.population = c.at("population").get<std::size_t>();
      model.clusters.push_back(cluster);
    }
    model.within_square_sum = j.value("error_square_sum", 0.0);
    model.within_abs_sum = j.value("error_abs_sum", 0.0);
    model.objective = j.value("objective", 0.0);
    if (j.contains("fit")) {
      const auto& f = j.at("fit");
      model.sweeps = f.value("sweeps", 0);
      model.converged = f.value("converged", false);
      if (meta) {
        meta->method = f.value("method", "");
        meta->prior_mean = f.value("prior_mean", 0.0);
        meta->prior_variance = f.value("prior_variance", 0.0);
        meta->new_cluster_variance = f.value("new_cluster_variance", 0.0);
        meta->concentration = f.value("concentration", 0.0);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, "bad cluster model in " + path + ": " + e.what());
  }
  if (model.clusters.empty())
    throw Error(ErrorKind::parse, path + ": cluster model has no clusters");
  return model;
}

void write_dirichlet_models(const std::string& path,
                            const std::vector<DirichletFeatureModel>& models) {
  json features = json::array();
  for (const auto& m : models)
    features.push_back({{"feature_id", m.feature_id}, {"alpha", m.alpha}});
  dump_json(path, json{{"features", features}});
}

std::vector<DirichletFeatureModel> read_dirichlet_models(
    const std::string& path) {
  const json j = load_json(path);
  std::vector<DirichletFeatureModel> models;
  try {
    for (const auto& f : j.at("features")) {
      DirichletFeatureModel m;
      m.feature_id = f.at("feature_id").get<std::string>();
      m.alpha = f.at("alpha").get<std::vector<double>>();
      models.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, "bad Dirichlet model in " + path + ": " + e.what());
  }
  return models;
}

void write_assignments(const std::string& path,
                       const std::vector<FeatureAssignment>& assignments) {
  auto out = open_out(path);
  out << "prosumer_id,feature_id,category\n";
  for (const auto& a : assignments)
    for (const auto& [feature, category] : a.categories)
      out << a.prosumer_id << ',' << feature << ',' << category << '\n';
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

std::vector<FeatureAssignment> read_assignments(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::parse, path + ": empty assignments file");
  std::vector<FeatureAssignment> out;
  std::map<std::string, std::size_t> index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 3)
      throw Error(ErrorKind::parse,
                  path + ":" + std::to_string(line_no) + ": need 3 fields");
    auto [it, fresh] = index.emplace(f[0], out.size());
    if (fresh) out.push_back({f[0], {}});
    out[it->second].categories[f[1]] =
        static_cast<int>(parse_int(f[2], path + ":" + std::to_string(line_no)));
  }
  return out;
}

void write_profile_export(const std::string& path, const ProfileExport& data) {
  if (data.prosumer_ids.size() != data.values.size() ||
      data.day_index.size() != data.values.size())
    throw Error(ErrorKind::domain, "export columns have mismatched lengths");
  auto out = open_out(path);
  out << "prosumer_id,day";
  char col[8];
  for (int k = 0; k < kSlotsPerDay; ++k) {
    std::snprintf(col, sizeof col, ",v%02d", k);
    out << col;
  }
  out << '\n';
  for (std::size_t r = 0; r < data.values.size(); ++r) {
    out << data.prosumer_ids[r] << ',' << data.day_index[r];
    for (int k = 0; k < kSlotsPerDay; ++k) out << ',' << fmt(data.values[r][k]);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

ProfileExport read_profile_export(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::parse, path + ": empty export");
  ProfileExport data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 2 + kSlotsPerDay)
      throw Error(ErrorKind::parse,
                  path + ":" + std::to_string(line_no) + ": field count");
    const std::string ctx = path + ":" + std::to_string(line_no);
    data.prosumer_ids.push_back(f[0]);
    data.day_index.push_back(static_cast<int>(parse_int(f[1], ctx)));
    std::array<double, kSlotsPerDay> row;
    for (int k = 0; k < kSlotsPerDay; ++k)
      row[k] = parse_number(f[2 + k], ctx);
    data.values.push_back(row);
  }
  return data;
}

void write_series_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::array<double, kSlotsPerDay>>>&
        rows) {
  auto out = open_out(path);
  out << "name";
  char col[8];
  for (int k = 0; k < kSlotsPerDay; ++k) {
    std::snprintf(col, sizeof col, ",v%02d", k);
    out << col;
  }
  out << '\n';
  for (const auto& [name, values] : rows) {
    out << name;
    for (int k = 0; k < kSlotsPerDay; ++k) out << ',' << fmt(values[k]);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

void write_grid_csv(const std::string& path,
                    const std::vector<std::vector<double>>& grid) {
  auto out = open_out(path);
  for (const auto& row : grid) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << fmt(row[j]);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

void write_report_json(const std::string& path,
                       const ValidationReport& report) {
  json autocorr = json::object();
  for (const auto& [lag, value] : report.autocorrelation_by_lag)
    autocorr[std::to_string(lag)] = value;
  dump_json(path, json{{"mae_percent", report.mae.percent},
                       {"mae_slots_used", report.mae.slots_used},
                       {"mae_slots_excluded", report.mae.slots_excluded},
                       {"max_abs_error", report.max_error.value},
                       {"max_abs_error_slot", report.max_error.slot},
                       {"autocorrelation_by_lag", autocorr},
                       {"observed_profiles", report.observed_profiles},
                       {"synthetic_profiles", report.synthetic_profiles}});
}

std::string file_hash_hex(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  const std::uint64_t h = hash_label(bytes);
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace prosyn::io
