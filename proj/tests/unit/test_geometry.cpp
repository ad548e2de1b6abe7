// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nfis/geometry.hpp"
#include "nfis/special_math.hpp"

using namespace nfis;

namespace {
const double kPiT = std::acos(-1.0);
const double kLambda = 3e8 / 60e9;
}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("ELAS element spacing and positions") {
    const auto g = build_elas(32, 32, 60e9);
    CHECK(g.d_tx() == doctest::Approx(kLambda / 2));
    CHECK(g.d_rx() == doctest::Approx(32 * kLambda / 2));
    CHECK(g.d_rx() == doctest::Approx(0.08));
    CHECK(g.rx_offset(0) == doctest::Approx(-15.5 * 0.08));
    CHECK(g.rx_offset(31) == doctest::Approx(15.5 * 0.08));
    double sum = 0.0;
    for (const auto& p : g.rx_positions()) {
      CHECK(p.x == 0.0);
      sum += p.y;
    }
    CHECK(std::abs(sum) < 1e-12);
    const auto h = build_half_wavelength(32, 32, 60e9);
    CHECK(h.d_rx() == doctest::Approx(kLambda / 2));
    CHECK_THROWS_AS(build_elas(1, 32, 60e9), std::invalid_argument);
    CHECK_THROWS_AS(build_elas(32, 32, 0.0), std::invalid_argument);
  }

  TEST_CASE("reference near-field scales") {
    const auto g = build_elas(32, 32, 60e9);
    const auto s = near_field_scales(g);
    CHECK(s.fraunhofer_rx == doctest::Approx(2460.16).epsilon(1e-9));
    CHECK(std::abs(s.max_focus - 376.1) < 2.0);
    CHECK(std::abs(s.super_res_radius(200e6) - 11.9) < 0.1);
    CHECK(std::abs(fraunhofer_distance(g.aperture_tx(), g.wavelength()) - 2.4) < 0.2);
    // Large-array accessor: D_F / (4 xi^2) ~ D_F / 6.95.
    const double ratio = max_focus_large_n(g, kXi3dbNominal) / s.fraunhofer_rx;
    CHECK(ratio == doctest::Approx(1.0 / 6.952).epsilon(0.02));
    CHECK_THROWS_AS(fraunhofer_distance(0.0, 1.0), std::domain_error);
  }

  TEST_CASE("depth of focus and super-resolution radius") {
    const double rdf = 376.1;
    CHECK(depth_of_focus(15.0, rdf) == doctest::Approx(2 * 225.0 * rdf / (rdf * rdf - 225.0)));
    CHECK(depth_of_focus(400.0, rdf) == std::numeric_limits<double>::infinity());
    // At r_sr the focusing depth equals c / 2B.
    for (double b : {50e6, 200e6, 750e6}) {
      const double r = super_resolution_radius(b, rdf);
      CHECK(depth_of_focus(r, rdf) == doctest::Approx(bandwidth_resolution(b)).epsilon(1e-12));
      CHECK(range_resolution(0.9 * r, b, rdf) < bandwidth_resolution(b));
      CHECK(range_resolution(1.1 * r, b, rdf) == bandwidth_resolution(b));
    }
    CHECK(bandwidth_resolution(750e6) == doctest::Approx(0.2));
  }

  TEST_CASE("fresnel distance tracks the exact distance") {
    const auto g = build_elas(32, 32, 60e9);
    for (double r : {5.0, 20.0, 100.0}) {
      for (double th : {0.0, 0.3, -0.6}) {
        const Point2 p{r * std::cos(th), r * std::sin(th)};
        for (int n : {0, 10, 31}) {
          const double exact = exact_distance(p, g.rx_positions()[n]);
          const double approx = fresnel_distance(r, th, g.rx_offset(n));
          // Third-order remainder bound |y|^3 / (2 r^2).
          const double y = std::abs(g.rx_offset(n));
          CHECK(std::abs(exact - approx) <= y * y * y / (2 * r * r) + 1e-12);
        }
      }
    }
    CHECK(std::abs(fresnel_distance(1e6, 0.2, 1.0) - (1e6 - std::sin(0.2))) < 1e-6);
  }

  TEST_CASE("grating lobes sit on Tx notches") {
    const auto g = build_elas(32, 32, 60e9);
    const auto lobes = rx_grating_lobe_angles(g, 0.0);
    const auto notches = tx_notch_angles(g, 0.0);
    CHECK(lobes.size() == 30);
    for (double a : lobes) {
      bool found = false;
      for (double b : notches) found = found || std::abs(a - b) < 1e-12;
      CHECK(found);
      CHECK(std::abs(std::sin(a) * g.d_rx() / g.wavelength() -
                     std::round(std::sin(a) * g.d_rx() / g.wavelength())) < 1e-9);
    }
  }

  TEST_CASE("resolution map layout and regimes") {
    const auto g = build_elas(32, 32, 60e9);
    const auto m = range_resolution_map(g, 200e6, Region{}, 0.5);
    CHECK(m.nx() == 40);
    CHECK(m.ny() == 40);
    CHECK(m.xs.front() == doctest::Approx(0.25));
    CHECK(m.ys.front() == doctest::Approx(-9.75));
    // Close to the array the focusing limit wins; far away the bandwidth does.
    CHECK(m.at(4, 20) < 0.75);
    CHECK(m.at(39, 20) == doctest::Approx(0.75));
    std::ostringstream os;
    write_resolution_map_csv(os, m);
    CHECK(os.str().rfind("x_m,y_m,delta_r_m\n", 0) == 0);
    CHECK_THROWS_AS(range_resolution_map(g, 200e6, Region{}, 0.0), std::domain_error);
  }
}
