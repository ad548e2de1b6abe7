// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "nfis/special_math.hpp"

using namespace nfis;

namespace {

const double kPiT = std::acos(-1.0);

// Quadrature oracle, one oscillation-sized panel at a time.
double fresnel_quad(double x, bool sine) {
  auto f = [sine](double t) {
    const double ph = kPiT * t * t / 2.0;
    return sine ? std::sin(ph) : std::cos(ph);
  };
  const double ax = std::abs(x);
  double acc = 0.0;
  double a = 0.0;
  while (a < ax) {
    const double width = std::min(0.25, 0.5 / (1.0 + a));
    const double b = std::min(ax, a + width);
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0);
    a = b;
  }
  return x < 0 ? -acc : acc;
}

}  // namespace

TEST_SUITE("special_math") {
  TEST_CASE("fresnel matches quadrature to 1e-9 across the series/continued-fraction switch") {
    for (double x : {0.0, 1e-6, 0.01, 0.3, 0.9, 1.2, 1.5, 1.599, 1.6, 1.601, 1.7, 2.0, 2.5, 3.3,
                     4.75, 6.0, 8.2, 12.0, 17.5, 25.0, -0.7, -3.1}) {
      const auto v = fresnel(x);
      CAPTURE(x);
      CHECK(std::abs(v.c_val - fresnel_quad(x, false)) < 1e-9);
      CHECK(std::abs(v.s_val - fresnel_quad(x, true)) < 1e-9);
    }
  }

  TEST_CASE("fresnel reference points and limits") {
    const auto one = fresnel(1.0);
    CHECK(one.c_val == doctest::Approx(0.7798934003768228).epsilon(1e-12));
    CHECK(one.s_val == doctest::Approx(0.4382591473903548).epsilon(1e-12));
    const auto big = fresnel(1e6);
    CHECK(std::abs(big.c_val - 0.5) < 1e-6);
    CHECK(std::abs(big.s_val - 0.5) < 1e-6);
    const auto tiny = fresnel(1e-8);
    CHECK(tiny.c_val == doctest::Approx(1e-8).epsilon(1e-12));
  }

  TEST_CASE("fresnel is odd and rejects non-finite input") {
    for (double x : {0.2, 1.6, 5.0}) {
      CHECK(fresnel(-x).c_val == -fresnel(x).c_val);
      CHECK(fresnel(-x).s_val == -fresnel(x).s_val);
    }
    CHECK_THROWS_AS(fresnel(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(fresnel(std::numeric_limits<double>::infinity()), std::domain_error);
  }

  TEST_CASE("focusing function") {
    CHECK(fresnel_f(0.0) == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(fresnel_f(1e-7) - std::complex<double>(1.0, 0.0)) < 1e-12);
    CHECK_THROWS_AS(fresnel_f(-0.1), std::domain_error);
    const double x = 2.3;
    const auto f = fresnel_f(x);
    CHECK(f.real() == doctest::Approx(fresnel_quad(x, false) / x).epsilon(1e-10));
    CHECK(f.imag() == doctest::Approx(fresnel_quad(x, true) / x).epsilon(1e-10));
  }

  TEST_CASE("half-power root") {
    const double xi = solve_xi_3db();
    CHECK(std::abs(std::norm(fresnel_f(xi)) - 0.5) < 1e-12);
    CHECK(xi == doctest::Approx(kXi3dbNominal).epsilon(1e-3));
    // |F|^2 falls monotonically up to the root.
    CHECK(std::norm(fresnel_f(xi - 0.01)) > 0.5);
    CHECK(std::norm(fresnel_f(xi + 0.01)) < 0.5);
  }

  TEST_CASE("dirichlet ratio against direct exponential sums") {
    for (int n : {1, 2, 5, 32}) {
      for (double u : {0.013, 0.4, 1.1, 2.9, -0.77}) {
        std::complex<double> acc{};
        for (int i = 0; i < n; ++i) acc += std::polar(1.0, 2.0 * u * (i - (n - 1) / 2.0));
        CAPTURE(n);
        CAPTURE(u);
        CHECK(std::abs(dirichlet_ratio(u, n) - acc.real() / n) < 1e-12);
      }
    }
    CHECK(dirichlet_ratio(0.0, 7) == 1.0);
    CHECK(dirichlet_ratio(kPiT, 4) == doctest::Approx(-1.0));
    CHECK(dirichlet_ratio(kPiT, 5) == doctest::Approx(1.0));
    CHECK(std::abs(dirichlet_ratio(1e-9, 1024) - 1.0) < 1e-9);
    CHECK_THROWS_AS(dirichlet_ratio(0.1, 0), std::invalid_argument);
  }
}
