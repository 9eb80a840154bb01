#include <doctest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "prosyn/io.hpp"
#include "temp_dir.hpp"

using namespace prosyn;
namespace fs = std::filesystem;

namespace {

using testutil::TempDir;
using testutil::read_bytes;

std::vector<DailyProfile> sample_profiles(bool with_generation) {
  std::vector<DailyProfile> profiles;
  DailyProfile a;
  a.customer_id = "C0001";
  a.date = parse_date("2021-03-01");
  a.day_type = DayType::weekday;
  for (int k = 0; k < kSlotsPerDay; ++k)
    a.demand_kwh[k] = 0.01 * k + 0.005;
  if (with_generation) {
    std::array<double, kSlotsPerDay> gen{};
    for (int k = 0; k < kSlotsPerDay; ++k) gen[k] = k > 14 ? 0.125 * k : 0.0;
    a.generation_kwh = gen;
  }
  DailyProfile b;
  b.customer_id = "C0002";
  b.date = parse_date("2021-03-06");
  b.day_type = DayType::weekend;
  for (int k = 0; k < kSlotsPerDay; ++k)
    b.demand_kwh[k] = 1.0 / (k + 3.0);  // exercises shortest-round-trip
  profiles.push_back(a);
  profiles.push_back(b);
  return profiles;
}

}  // namespace

TEST_CASE("profile stores round-trip with mixed generation columns") {
  TempDir dir;
  std::vector<DailyProfile> profiles = sample_profiles(true);
  const std::string path = dir.file("store.csv");
  io::write_profile_store(path, profiles);
  std::vector<DailyProfile> back = io::read_profile_store(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].customer_id == "C0001");
  CHECK(back[0].date == profiles[0].date);
  CHECK(back[0].day_type == DayType::weekday);
  CHECK(back[0].demand_kwh == profiles[0].demand_kwh);
  REQUIRE(back[0].generation_kwh.has_value());
  CHECK(*back[0].generation_kwh == *profiles[0].generation_kwh);
  CHECK_FALSE(back[1].generation_kwh.has_value());
  CHECK(back[1].demand_kwh == profiles[1].demand_kwh);
}

TEST_CASE("stores without generation omit the columns entirely") {
  TempDir dir;
  const std::string path = dir.file("store.csv");
  io::write_profile_store(path, sample_profiles(false));
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("g00") == std::string::npos);
  std::vector<DailyProfile> back = io::read_profile_store(path);
  CHECK_FALSE(back[0].generation_kwh.has_value());
}

TEST_CASE("profile store writes are byte-deterministic") {
  TempDir dir;
  io::write_profile_store(dir.file("a.csv"), sample_profiles(true));
  io::write_profile_store(dir.file("b.csv"), sample_profiles(true));
  CHECK(read_bytes(dir.file("a.csv")) == read_bytes(dir.file("b.csv")));
  CHECK(io::file_hash_hex(dir.file("a.csv")) ==
        io::file_hash_hex(dir.file("b.csv")));
}

TEST_CASE("tensors round-trip exactly, metadata included") {
  TempDir dir;
  TransitionTensor tensor;
  tensor.n_max = 60;
  tensor.day_type = DayType::weekend;
  tensor.source_population = 17;
  tensor.add(0, 4, 4, 2.0);
  tensor.add(20, 11, 6, 0.25);
  tensor.add(47, 59, 60, 3.0);
  const std::string path = dir.file("tensor.csv");
  io::write_tensor(path, tensor, "feedcafe");
  TransitionTensor back = io::read_tensor(path);
  CHECK(back.n_max == 60);
  CHECK(back.day_type == DayType::weekend);
  CHECK(back.source_population == 17);
  CHECK(back.transition_count() == 3);
  CHECK(back.row_counts(0, 4)[4] == doctest::Approx(2.0));
  CHECK(back.row_counts(20, 11)[6] == doctest::Approx(0.25));
  CHECK(back.row_counts(47, 59)[60] == doctest::Approx(3.0));

  // Rewriting the parsed tensor reproduces the file byte for byte.
  io::write_tensor(dir.file("again.csv"), back, "feedcafe");
  CHECK(read_bytes(path) == read_bytes(dir.file("again.csv")));
}

TEST_CASE("clearness matrices round-trip") {
  TempDir dir;
  ClearnessMatrix m;
  m.add(50, 52, 5.0);
  m.add(100, 100, 1.5);
  const std::string path = dir.file("ci.csv");
  io::write_ci_matrix(path, m);
  ClearnessMatrix back = io::read_ci_matrix(path);
  CHECK(back.count(50, 52) == doctest::Approx(5.0));
  CHECK(back.count(100, 100) == doctest::Approx(1.5));
  CHECK(back.total() == doctest::Approx(6.5));
}

TEST_CASE("cluster models round-trip with fit metadata") {
  TempDir dir;
  ClusterModel model;
  model.clusters.push_back({0.6368, 0.0338, 165});
  model.clusters.push_back({1.3293, 0.0104, 20});
  model.clusters.push_back({4.396, 0.0, 1});
  model.within_square_sum = 5.833;
  model.within_abs_sum = 4.2;
  model.objective = -120.5;
  model.sweeps = 7;
  model.converged = true;
  io::ClusterFitMeta meta;
  meta.method = "map_dp";
  meta.prior_mean = 0.7428;
  meta.prior_variance = 0.17;
  meta.new_cluster_variance = 0.017;
  meta.concentration = 1.0;

  const std::string path = dir.file("model.json");
  io::write_cluster_model(path, model, meta);
  io::ClusterFitMeta meta_back;
  ClusterModel back = io::read_cluster_model(path, &meta_back);
  REQUIRE(back.clusters.size() == 3);
  CHECK(back.clusters[0].mean == doctest::Approx(0.6368));
  CHECK(back.clusters[0].variance == doctest::Approx(0.0338));
  CHECK(back.clusters[0].population == 165);
  CHECK(back.clusters[2].population == 1);
  CHECK(back.within_square_sum == doctest::Approx(5.833));
  CHECK(back.within_abs_sum == doctest::Approx(4.2));
  CHECK(back.objective == doctest::Approx(-120.5));
  CHECK(back.sweeps == 7);
  CHECK(back.converged);
  CHECK(meta_back.method == "map_dp");
  CHECK(meta_back.prior_mean == doctest::Approx(0.7428));
  CHECK(meta_back.new_cluster_variance == doctest::Approx(0.017));
}

TEST_CASE("dirichlet models and assignments round-trip") {
  TempDir dir;
  std::vector<DirichletFeatureModel> models;
  models.push_back({"capacity", {165.0, 20.0, 3.0, 1.0}});
  models.push_back({"tariff", {5.0, 2.5}});
  io::write_dirichlet_models(dir.file("dir.json"), models);
  auto models_back = io::read_dirichlet_models(dir.file("dir.json"));
  REQUIRE(models_back.size() == 2);
  CHECK(models_back[0].feature_id == "capacity");
  CHECK(models_back[0].alpha == models[0].alpha);
  CHECK(models_back[1].alpha == models[1].alpha);

  std::vector<FeatureAssignment> assignments;
  assignments.push_back({"P0001", {{"capacity", 0}, {"tariff", 1}}});
  assignments.push_back({"P0002", {{"capacity", 3}}});
  io::write_assignments(dir.file("assign.csv"), assignments);
  auto back = io::read_assignments(dir.file("assign.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back == assignments);
}

TEST_CASE("profile exports round-trip") {
  TempDir dir;
  io::ProfileExport data;
  data.prosumer_ids = {"P0001", "P0001", "P0002"};
  data.day_index = {0, 1, 0};
  data.values.resize(3);
  for (int k = 0; k < kSlotsPerDay; ++k) {
    data.values[0][k] = 0.01 * k;
    data.values[1][k] = 0.02 * k;
    data.values[2][k] = 1.0 / (k + 1.0);
  }
  const std::string path = dir.file("export.csv");
  io::write_profile_export(path, data);
  io::ProfileExport back = io::read_profile_export(path);
  CHECK(back.prosumer_ids == data.prosumer_ids);
  CHECK(back.day_index == data.day_index);
  REQUIRE(back.values.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.values[i] == data.values[i]);
}

TEST_CASE("missing files and malformed headers raise typed errors") {
  TempDir dir;
  CHECK_THROWS_AS(io::read_profile_store(dir.file("absent.csv")), Error);
  CHECK_THROWS_AS(io::read_tensor(dir.file("absent.csv")), Error);

  std::ofstream(dir.file("garbage.csv")) << "not,a,tensor\n1,2,3\n";
  CHECK_THROWS_AS(io::read_tensor(dir.file("garbage.csv")), Error);
  CHECK_THROWS_AS(io::read_cluster_model(dir.file("garbage.csv")), Error);
}

TEST_CASE("file hashing distinguishes contents") {
  TempDir dir;
  std::ofstream(dir.file("x")) << "alpha";
  std::ofstream(dir.file("y")) << "beta";
  const std::string hx = io::file_hash_hex(dir.file("x"));
  CHECK(hx == io::file_hash_hex(dir.file("x")));
  CHECK(hx != io::file_hash_hex(dir.file("y")));
  CHECK(hx.size() == 16);
  CHECK_THROWS_AS(io::file_hash_hex(dir.file("absent")), Error);
}
