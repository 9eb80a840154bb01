#include <doctest.h>

#include <cmath>
#include <vector>

#include "prosyn/clustering.hpp"
#include "prosyn/rng.hpp"

using namespace prosyn;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Two tight groups around 0.6 and 4.4 with a known mixture-like shape.
std::vector<double> two_groups() {
  std::vector<double> points;
  for (int i = 0; i < 12; ++i) points.push_back(0.55 + 0.01 * i);
  for (int i = 0; i < 4; ++i) points.push_back(4.35 + 0.03 * i);
  return points;
}

}  // namespace

TEST_CASE("kmeans recovers well-separated groups") {
  std::vector<double> points = two_groups();
  ClusterModel model = kmeans(points, 2, {1.0, 4.0});
  REQUIRE(model.clusters.size() == 2);
  CHECK(model.converged);
  CHECK(model.clusters[0].population == 12);  // sorted by population
  CHECK(model.clusters[1].population == 4);
  CHECK(model.clusters[0].mean == doctest::Approx(0.605));
  CHECK(model.clusters[1].mean == doctest::Approx(4.395));
  for (std::size_t i = 0; i < 12; ++i) CHECK(model.assignments[i] == 0);
  for (std::size_t i = 12; i < 16; ++i) CHECK(model.assignments[i] == 1);
}

TEST_CASE("kmeans with one cluster reports the global moments") {
  std::vector<double> points{1.0, 2.0, 3.0};
  ClusterModel model = kmeans(points, 1, {0.0});
  REQUIRE(model.clusters.size() == 1);
  CHECK(model.clusters[0].mean == doctest::Approx(2.0));
  CHECK(model.clusters[0].variance == doctest::Approx(2.0 / 3.0));
  CHECK(model.within_square_sum == doctest::Approx(2.0));
  CHECK(model.within_abs_sum == doctest::Approx(2.0));
}

TEST_CASE("kmeans reseeds empty clusters instead of losing them") {
  std::vector<double> points{0.0, 0.1, 10.0};
  // Both seeds start far below the data; one cluster would stay empty.
  ClusterModel model = kmeans(points, 2, {-100.0, -99.0});
  REQUIRE(model.clusters.size() == 2);
  CHECK(model.clusters[0].population + model.clusters[1].population == 3);
}

TEST_CASE("the nonparametric fit discovers the group count itself") {
  // A tight dominant group plus one far outlier: the collapsed sweep can
  // peel the outlier off because the dominant group's variance stays small
  // once the point is removed. The split must emerge without a given K.
  std::vector<double> points;
  for (int i = 0; i < 6; ++i) {
    points.push_back(0.60);
    points.push_back(0.62);
  }
  points.push_back(4.40);
  MapDpPrior prior;
  prior.prior_mean = 0.9;
  prior.prior_variance = 1.0;
  prior.concentration = 1.0;
  ClusterModel model = map_dp(points, prior);
  REQUIRE(model.clusters.size() == 2);
  CHECK(model.converged);
  CHECK(model.clusters[0].population == 12);
  CHECK(model.clusters[0].mean == doctest::Approx(0.61));
  CHECK(model.clusters[0].variance == doctest::Approx(0.0001));
  CHECK(model.clusters[1].population == 1);
  CHECK(model.clusters[1].mean == doctest::Approx(4.40));
  CHECK(model.clusters[1].variance == doctest::Approx(0.0));
  CHECK(model.within_square_sum == doctest::Approx(12 * 0.0001));
}

TEST_CASE("identical points collapse to a single zero-variance cluster") {
  std::vector<double> points(20, 0.64);
  MapDpPrior prior;
  prior.prior_mean = 0.7;
  prior.prior_variance = 0.17;
  ClusterModel model = map_dp(points, prior);
  REQUIRE(model.clusters.size() == 1);
  CHECK(model.clusters[0].mean == doctest::Approx(0.64));
  CHECK(model.clusters[0].variance == doctest::Approx(0.0));
  CHECK(std::isfinite(model.objective));
}

TEST_CASE("the fit objective never increases across accepted sweeps") {
  RngStream rng(5);
  std::vector<double> points;
  for (int i = 0; i < 60; ++i) points.push_back(0.6 + 0.18 * rng.normal());
  for (int i = 0; i < 25; ++i) points.push_back(1.3 + 0.10 * rng.normal());
  for (int i = 0; i < 8; ++i) points.push_back(4.4 + 0.05 * rng.normal());
  MapDpPrior prior;
  prior.prior_mean = 0.9;
  prior.prior_variance = 0.8;
  ClusterModel model = map_dp(points, prior);
  REQUIRE(model.objective_trace.size() >= 1);
  for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
    CHECK(model.objective_trace[i] <= model.objective_trace[i - 1] + 1e-9);
  CHECK(model.objective == doctest::Approx(model.objective_trace.back()));
}

TEST_CASE("a larger concentration never finds fewer clusters") {
  RngStream rng(6);
  std::vector<double> points;
  for (int i = 0; i < 40; ++i) points.push_back(1.0 + 0.3 * rng.normal());
  for (int i = 0; i < 40; ++i) points.push_back(3.0 + 0.3 * rng.normal());
  MapDpPrior prior;
  prior.prior_mean = 2.0;
  prior.prior_variance = 1.5;
  prior.concentration = 1e-6;
  std::size_t k_small = map_dp(points, prior).clusters.size();
  prior.concentration = 1e6;
  std::size_t k_large = map_dp(points, prior).clusters.size();
  CHECK(k_large >= k_small);
  CHECK(k_small >= 1);
}

TEST_CASE("reported statistics are mutually consistent") {
  RngStream rng(7);
  std::vector<double> points;
  for (int i = 0; i < 50; ++i)
    points.push_back(std::abs(0.7 + 0.4 * rng.normal()));
  MapDpPrior prior;
  prior.prior_mean = 0.7;
  prior.prior_variance = 0.2;
  ClusterModel model = map_dp(points, prior);

  std::size_t total = 0;
  double square_sum = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Cluster& c =
        model.clusters[static_cast<std::size_t>(model.assignments[i])];
    square_sum += (points[i] - c.mean) * (points[i] - c.mean);
    abs_sum += std::abs(points[i] - c.mean);
  }
  for (const Cluster& c : model.clusters) total += c.population;
  CHECK(total == points.size());
  CHECK(model.total_population() == points.size());
  CHECK(model.within_square_sum == doctest::Approx(square_sum));
  CHECK(model.within_abs_sum == doctest::Approx(abs_sum));
  for (std::size_t k = 1; k < model.clusters.size(); ++k)
    CHECK(model.clusters[k - 1].population >= model.clusters[k].population);
}

TEST_CASE("the mixture density integrates the smooth clusters only") {
  ClusterModel model;
  model.clusters.push_back({0.0, 1.0, 9});
  model.clusters.push_back({4.4, 0.0, 1});  // point mass, no smooth part

  const double at_zero = gmm_pdf(model, 0.0);
  CHECK(at_zero == doctest::Approx(0.9 / std::sqrt(kTwoPi)));

  // Trapezoid integral over a wide window captures the smooth 90%.
  double integral = 0.0;
  const double dx = 0.01;
  for (double x = -8.0; x < 8.0; x += dx)
    integral += gmm_pdf(model, x + dx / 2) * dx;
  CHECK(integral == doctest::Approx(0.9).epsilon(1e-3));

  // The unweighted variant stacks unit-weight components instead.
  const double unweighted = gmm_pdf(model, 0.0, false);
  CHECK(unweighted == doctest::Approx(0.1 / std::sqrt(kTwoPi)));
}

TEST_CASE("cluster populations export as a concentration vector") {
  ClusterModel model;
  model.clusters.push_back({0.6, 0.03, 165});
  model.clusters.push_back({1.3, 0.01, 20});
  model.clusters.push_back({1.9, 0.02, 3});
  model.clusters.push_back({4.4, 0.0, 1});
  std::vector<double> alpha = cluster_counts(model);
  CHECK(alpha == std::vector<double>{165.0, 20.0, 3.0, 1.0});
}
