// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nfis/detector.hpp"
#include "nfis/random.hpp"
#include "nfis/scene.hpp"
#include "nfis/signal.hpp"

using namespace nfis;
using cd = std::complex<double>;

namespace {

std::vector<cd> unit_beam(double angle, int n) {
  auto w = tx_steering(angle, n).entries;
  for (auto& v : w) v /= std::sqrt(static_cast<double>(n));
  return w;
}

SystemParams params(double bw, int k, int m) {
  SystemParams p;
  p.bandwidth_hz = bw;
  p.n_subcarriers = k;
  p.n_symbols = m;
  return p;
}

SearchGrid angle_grid(std::vector<double> thetas) {
  SearchGrid g;
  g.nx = static_cast<int>(thetas.size());
  g.ny = 1;
  for (double t : thetas) g.points.push_back({5 * std::cos(t), 5 * std::sin(t), 5.0, t});
  return g;
}

}  // namespace

TEST_SUITE("detector") {
  TEST_CASE("search grid") {
    const auto g = build_search_grid({3.5, 0.0}, 3.0, 3.0, 0.1);
    CHECK(g.cardinality() == 961);
    CHECK(g.nx == 31);
    CHECK(g.points.front().x == doctest::Approx(2.0));
    CHECK(g.points.back().y == doctest::Approx(1.5));
    for (const auto& p : g.points) {
      CHECK(std::abs(p.r * std::cos(p.theta) - p.x) < 1e-12);
      CHECK(std::abs(p.r * std::sin(p.theta) - p.y) < 1e-12);
    }
    CHECK(build_search_grid({0, 0}, 1.0, 0.5, 0.25).cardinality() == 5 * 3);
    CHECK_THROWS_AS(build_search_grid({0, 0}, 1.0, 1.0, 0.0), std::invalid_argument);
  }

  TEST_CASE("threshold") {
    CHECK(glrt_threshold(2.0, 1.0, 961) == doctest::Approx(2.0 * std::log(961.0)));
    CHECK(glrt_threshold(1.0, 1.0, 961) == doctest::Approx(6.868).epsilon(1e-3));
    CHECK(glrt_threshold(3.0, 961 / std::exp(1.0), 961) == doctest::Approx(3.0));
    CHECK_THROWS_AS(glrt_threshold(1.0, 961.0, 961), std::invalid_argument);
    CHECK_THROWS_AS(glrt_threshold(1.0, 0.0, 961), std::invalid_argument);
  }

  TEST_CASE("beam directions") {
    const auto three = beam_directions(angle_grid({0.0, 0.04, 0.10}), 32);
    REQUIRE(three.size() == 3);
    CHECK(three.front() == doctest::Approx(0.0));
    CHECK(three.back() == doctest::Approx(0.10));
    const auto one = beam_directions(angle_grid({0.2, 0.23}), 32);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(0.215));
    // The 3x3 m box around (3.5, 0) subtends 2 atan(1.5 / 2) at its near
    // corners, so the scan needs ceil(1.287 / 0.0625) + 1 beams.
    const auto g = build_search_grid({3.5, 0.0}, 3.0, 3.0, 0.1);
    const auto dirs = beam_directions(g, 32);
    CHECK(dirs.size() == 22);
    CHECK(dirs.front() == doctest::Approx(-std::atan2(1.5, 2.0)));
  }

  TEST_CASE("metric: matched value, fast path, invariances") {
    const auto geom = build_elas(4, 4, 60e9);
    const auto p = params(200e6, 16, 3);
    const auto x = generate_symbols(16, 3, 4);
    const auto s = make_scatterer({5.0, 0.4}, 0.25, 60e9);
    const std::vector<Scatterer> sv{s};
    const auto w = unit_beam(s.angle_ref, 4);
    SynthesisOptions o;
    o.add_noise = false;
    const auto y = synthesize_received(sv, w, geom, x, p, 0, o);
    const auto b = rx_nf_steering(s.angle_ref, s.range_ref, geom);
    double bb = 0.0;
    for (const auto& e : b.entries) bb += std::norm(e);
    const double matched =
        y.amp_scale * y.amp_scale * std::norm(effective_gain(s, w)) * x.energy() * bb;
    const Candidate truth{s.range_ref, s.angle_ref, 0.0};
    const double l = glrt_metric(y, x, truth, geom, p);
    CHECK(l == doctest::Approx(matched).epsilon(1e-9));

    const GlrtEvaluator eval(y, x, p);
    for (double r : {4.0, 5.0, 5.02, 6.5}) {
      for (double th : {0.0, 0.08, s.angle_ref}) {
        const double slow = glrt_metric(y, x, {r, th, 0.0}, geom, p);
        CHECK(eval.evaluate(r, th, geom) == doctest::Approx(slow).epsilon(1e-9));
        CHECK(slow <= matched * (1 + 1e-12));
      }
    }
    auto scaled = y;
    for (auto& v : scaled.entries) v *= 3.0;
    CHECK(glrt_metric(scaled, x, truth, geom, p) == doctest::Approx(9 * l).epsilon(1e-12));
    auto rotated = y;
    for (auto& v : rotated.entries) v *= std::polar(1.0, 0.7);
    CHECK(glrt_metric(rotated, x, truth, geom, p) == doctest::Approx(l).epsilon(1e-12));
    CHECK_THROWS_AS(glrt_metric(y, x, {0.0, 0.0, 0.0}, geom, p), std::domain_error);
  }

  TEST_CASE("noise-only statistic has mean sigma^2") {
    const auto geom = build_elas(4, 8, 60e9);
    const auto p = params(200e6, 64, 2);
    const auto x = generate_symbols(64, 2, 1);
    SynthesisOptions o;
    o.allow_empty = true;
    double acc = 0.0;
    const int n = 4000;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto y = synthesize_received({}, unit_beam(0.0, 4), geom, x, p, 1000 + i, o);
      acc += glrt_metric(y, x, {5.0, 0.1, 0.0}, geom, p);
      var = y.noise_var;
    }
    // Exponential: relative standard error 1/sqrt(n) ~ 1.6%.
    CHECK(acc / n == doctest::Approx(var).epsilon(0.06));
  }

  TEST_CASE("peak picking fixtures") {
    const auto g = build_search_grid({0, 0}, 0.4, 0.4, 0.1);  // 5 x 5
    std::vector<double> flat(25, 3.0);
    CHECK(peak_pick(flat, g, 1.0).empty());
    std::vector<double> spike(25, 0.0);
    spike[g.index(2, 3)] = 5.0;
    CHECK(peak_pick(spike, g, 1.0) == std::vector<std::size_t>{g.index(2, 3)});
    CHECK(peak_pick(spike, g, 5.0).empty());
    std::vector<double> bumps(25, 0.0);
    for (int iy = 0; iy < 5; ++iy) {
      for (int ix = 0; ix < 5; ++ix) {
        bumps[g.index(ix, iy)] = 4 * std::exp(-(std::pow(ix - 0.0, 2) + std::pow(iy - 1.0, 2))) +
                                 3 * std::exp(-(std::pow(ix - 4.0, 2) + std::pow(iy - 3.0, 2)));
      }
    }
    CHECK(peak_pick(bumps, g, 0.5) == std::vector<std::size_t>{g.index(0, 1), g.index(4, 3)});
    std::vector<double> tie(25, 0.0);
    tie[g.index(1, 1)] = 2.0;
    tie[g.index(2, 1)] = 2.0;
    CHECK(peak_pick(tie, g, 1.0) == std::vector<std::size_t>{g.index(1, 1)});
    CHECK_THROWS_AS(peak_pick(std::vector<double>(3, 0.0), g, 0.0), std::invalid_argument);
  }

  TEST_CASE("high-SNR scatterer on a grid point peaks there") {
    for (auto mode : {SpacingMode::Elas, SpacingMode::HalfWavelength}) {
      const auto geom = build_array(mode, 16, 16, 60e9);
      auto p = params(200e6, 64, 2);
      p.eirp_w = 10.0;
      const auto x = generate_symbols(64, 2, 3);
      const auto grid = build_search_grid({3.5, 0.0}, 1.0, 1.0, 0.1);
      const std::vector<Scatterer> s{make_scatterer({3.6, 0.2}, 0.25, 60e9)};
      const auto map = build_radar_map(s, geom, p, x, grid, {}, 9);
      const auto it = std::max_element(map.glrt_values.begin(), map.glrt_values.end());
      const auto& best = grid.points[static_cast<std::size_t>(it - map.glrt_values.begin())];
      CHECK(best.x == doctest::Approx(3.6));
      CHECK(best.y == doctest::Approx(0.2));
      CHECK(map.estimates.size() == map.detections.size());
      for (auto i : map.detections) CHECK(map.glrt_values[i] > map.threshold);
    }
  }

  TEST_CASE("two scatterers two focusing depths apart along boresight are resolved") {
    const auto geom = build_elas(32, 32, 60e9);
    auto p = params(50e6, 64, 2);
    const auto x = generate_symbols(64, 2, 3);
    const auto grid = build_search_grid({3.5, 0.0}, 1.0, 0.4, 0.1);
    // DF(3.5 m) ~ 0.065 m; 0.2 m separation is three depths.
    const std::vector<Scatterer> s{make_scatterer({3.4, 0.0}, 0.25, 60e9),
                                   make_scatterer({3.6, 0.0}, 0.25, 60e9)};
    const auto map = build_radar_map(s, geom, p, x, grid, {}, 4);
    const auto has = [&](double px) {
      for (auto i : map.detections) {
        if (std::abs(grid.points[i].x - px) < 1e-9 && std::abs(grid.points[i].y) < 1e-9) return true;
      }
      return false;
    };
    CHECK(has(3.4));
    CHECK(has(3.6));
  }

  TEST_CASE("noise-only maps cross the threshold about FAR times") {
    const auto geom = build_elas(8, 8, 60e9);
    const auto p = params(200e6, 32, 2);
    const auto grid = build_search_grid({3.5, 0.0}, 3.0, 3.0, 0.1);
    double total = 0.0;
    const int maps = 200;
    for (int t = 0; t < maps; ++t) {
      const auto x = generate_symbols(32, 2, derive_seed(t, Stream::Symbols));
      const auto map = build_radar_map({}, geom, p, x, grid, {}, derive_seed(t, Stream::Noise));
      total += static_cast<double>(map.n_exceed);
      CHECK(map.detections.size() <= map.n_exceed);
    }
    CHECK(total / maps == doctest::Approx(1.0).epsilon(0.35));
  }

  TEST_CASE("CSV writers") {
    const auto geom = build_elas(4, 4, 60e9);
    const auto p = params(200e6, 8, 1);
    const auto x = generate_symbols(8, 1, 1);
    const auto grid = build_search_grid({3.5, 0.0}, 0.2, 0.2, 0.1);
    const auto map = build_radar_map({}, geom, p, x, grid, {}, 1);
    std::ostringstream a, b;
    write_radar_map_csv(a, map);
    write_detections_csv(b, map, 3);
    CHECK(a.str().rfind("x_m,y_m,r_m,theta_rad,glrt,detected\n", 0) == 0);
    const auto text = a.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
    CHECK(b.str().rfind("trial,beam_idx,x_m,y_m,glrt\n", 0) == 0);
  }
}
