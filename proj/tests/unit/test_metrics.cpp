// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gospa_oracle.hpp"
#include "nfis/metrics.hpp"

using namespace nfis;

namespace {

std::vector<Point2> random_set(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> out(n);
  for (auto& p : out) p = {u(rng), u(rng)};
  return out;
}

TrialResult trial_with(Point2 truth, Point2 est) {
  TrialResult t;
  t.true_centroid = truth;
  t.est_centroid = est;
  return t;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("GOSPA closed-form cases") {
    const std::vector<Point2> one{{0.0, 0.0}};
    const std::vector<Point2> none;
    auto r = gospa(one, one);
    CHECK(r.distance == 0.0);
    CHECK(r.n_missed == 0);
    CHECK(r.n_false == 0);
    r = gospa(one, none);
    CHECK(r.distance == doctest::Approx(std::sqrt(0.25 / 2)));
    CHECK(r.distance == doctest::Approx(0.3536).epsilon(1e-4));
    CHECK(r.n_missed == 1);
    CHECK(r.n_false == 0);
    r = gospa(one, std::vector<Point2>{{0.1, 0.0}});
    CHECK(r.distance == doctest::Approx(0.1));
    CHECK(r.n_missed == 0);
    // Outside the gate: one miss plus one false alarm.
    r = gospa(one, std::vector<Point2>{{0.6, 0.0}});
    CHECK(r.distance == doctest::Approx(0.5));
    CHECK(r.n_missed == 1);
    CHECK(r.n_false == 1);
    CHECK(gospa(none, none).distance == 0.0);
    CHECK_THROWS_AS(gospa(one, one, GospaParams{0.0, 2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(gospa(one, one, GospaParams{0.5, 2.0, 1.0}), std::invalid_argument);
  }

  TEST_CASE("assignment methods agree with the brute-force oracle") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> size(0, 6);
    for (int trial = 0; trial < 300; ++trial) {
      const auto a = random_set(rng, static_cast<std::size_t>(size(rng)));
      const auto b = random_set(rng, static_cast<std::size_t>(size(rng)));
      const auto ex = gospa(a, b, {}, AssignmentMethod::Exhaustive);
      const auto hu = gospa(a, b, {}, AssignmentMethod::Hungarian);
      CHECK(ex.distance == hu.distance);
      CHECK(ex.n_missed == hu.n_missed);
      CHECK(std::abs(ex.distance - oracle::gospa_bruteforce(a, b, 0.5, 2.0)) < 1e-12);
      // Symmetry.
      CHECK(gospa(b, a).distance == doctest::Approx(ex.distance).epsilon(1e-14));
    }
  }

  TEST_CASE("Hungarian on larger sets matches branch and bound") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_set(rng, 9);
      const auto b = random_set(rng, 10);
      CHECK(gospa(a, b, {}, AssignmentMethod::Hungarian).distance ==
            gospa(a, b, {}, AssignmentMethod::Exhaustive).distance);
    }
    const auto a = random_set(rng, 40);
    const auto b = random_set(rng, 55);
    const auto r = gospa(a, b);  // Hungarian path
    CHECK(r.n_false - r.n_missed == 15);
  }

  TEST_CASE("a far spurious estimate adds one false alarm") {
    std::mt19937_64 rng(2);
    const auto a = random_set(rng, 5);
    auto b = random_set(rng, 4);
    const auto base = gospa(a, b);
    b.push_back({50.0, 50.0});
    const auto more = gospa(a, b);
    CHECK(more.distance > base.distance);
    CHECK(more.n_false == base.n_false + 1);
  }

  TEST_CASE("hungarian assignment on a known matrix") {
    const std::vector<std::vector<double>> cost{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
    CHECK(hungarian_assignment(cost) == std::vector<std::size_t>{1, 0, 2});
  }

  TEST_CASE("centroid RMSE") {
    const std::vector<TrialResult> perfect{trial_with({1, 2}, {1, 2}), trial_with({3, 3}, {3, 3})};
    CHECK(centroid_rmse(perfect) == 0.0);
    const std::vector<TrialResult> one{trial_with({0, 0}, {0.3, 0.4})};
    CHECK(centroid_rmse(one) == doctest::Approx(0.5));
    const std::vector<TrialResult> two{trial_with({0, 0}, {0.1, 0}), trial_with({0, 0}, {0, 0.3})};
    CHECK(centroid_rmse(two) == doctest::Approx(std::sqrt(0.05)).epsilon(1e-12));
    CHECK(centroid_rmse(two) == doctest::Approx(0.2236).epsilon(1e-4));
    // Rigid translation leaves it unchanged.
    const std::vector<TrialResult> moved{trial_with({5, -2}, {5.1, -2}), trial_with({5, -2}, {5, -1.7})};
    CHECK(centroid_rmse(moved) == doctest::Approx(centroid_rmse(two)).epsilon(1e-12));
    // Trials without detections are left out.
    std::vector<TrialResult> with_fail = two;
    with_fail.emplace_back();
    CHECK(centroid_rmse(with_fail) == centroid_rmse(two));
    CHECK_THROWS_AS(centroid_rmse(std::vector<TrialResult>{}), std::domain_error);
    CHECK_THROWS_AS(centroid_rmse(std::vector<TrialResult>(2)), std::domain_error);
  }

  TEST_CASE("Monte Carlo runs are reproducible and thread-count independent") {
    ExperimentArm arm;
    arm.label = "elas";
    arm.n_tx = 8;
    arm.n_rx = 8;
    arm.system.n_subcarriers = 32;
    arm.system.n_symbols = 2;
    arm.roi_size = 1.0;
    const auto a = run_monte_carlo(arm, 4, 77, 1);
    const auto b = run_monte_carlo(arm, 4, 77, 3);
    REQUIRE(a.trials.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(a.trials[i].trial_seed == 77 + i);
      CHECK(a.trials[i].gospa == b.trials[i].gospa);
      CHECK(a.trials[i].estimates.size() == b.trials[i].estimates.size());
      CHECK(a.trials[i].truth.size() > 0);
    }
    CHECK(a.summary.rmse == b.summary.rmse);
    const auto single = run_trial(arm, 0, 77);
    CHECK(single.gospa == a.trials[0].gospa);
  }

  TEST_CASE("noise-free single scatterer: centroid error within half a cell diagonal") {
    ExperimentArm arm;
    arm.n_tx = 32;
    arm.n_rx = 32;
    arm.system.n_subcarriers = 64;
    arm.system.n_symbols = 2;
    arm.system.bandwidth_hz = 50e6;
    // Weak enough that only the main response clears the threshold.
    arm.system.eirp_w = 2e-3;
    arm.detector.add_noise = false;
    arm.target.length = 0.1;
    arm.target.width = 0.1;
    arm.target.q = 1.0;
    const auto mc = run_monte_carlo(arm, 2, 1, 1);
    CHECK(mc.summary.detect_fail_rate == 0.0);
    CHECK(mc.summary.rmse <= 0.0707 + 1e-9);
  }

  TEST_CASE("CSV headers") {
    std::ostringstream a, b, c;
    write_summary_header(a);
    CHECK(a.str() ==
          "config_label,bandwidth_hz,rmse_m,gospa_mean_m,missed_mean,false_mean,n_trials,detect_fail_rate\n");
    write_ground_truth_csv(b, std::vector<TrialResult>{});
    CHECK(b.str() == "trial,scatterer_id,x_m,y_m,r_m,theta_rad,rcs_m2\n");
    write_trials_csv(c, "x", std::vector<TrialResult>{});
    CHECK(c.str().rfind("config_label,trial,", 0) == 0);
  }
}
