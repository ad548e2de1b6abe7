// SPDX-License-Identifier: Apache-2.0
#include "nfis/special_math.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "nfis/constants.hpp"

namespace nfis {
namespace {

// Series and continued fraction meet here; the series loses about two
// digits to cancellation at the switch point, the fraction converges in
// a few dozen steps.
constexpr double kSeriesLimit = 1.6;
constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 500;

FresnelPair fresnel_series(double x) {
  // t_j = x (pi x^2 / 2)^j / j!; C takes even j, S odd j, each over (2j + 1).
  const double w = 0.5 * kPi * x * x;
  double term = x;
  double c = x;
  double s = 0.0;
  for (int j = 1; j < kMaxIterations; ++j) {
    term *= w / j;
    const double contrib = term / (2 * j + 1);
    const bool negative = ((j / 2) % 2) == 1;
    if (j % 2 == 0) {
      c += negative ? -contrib : contrib;
    } else {
      s += negative ? -contrib : contrib;
    }
    if (contrib < kEps * std::max(std::abs(c), std::abs(s))) break;
  }
  return {c, s};
}

// pi x^2 / 2 reduced modulo 2 pi while keeping the low-order bits of x^2.
double half_pi_square_phase(double x) {
  const double hi = x * x;
  const double lo = std::fma(x, x, -hi);
  const double reduced = std::fmod(hi, 4.0) + lo;
  return 0.5 * kPi * reduced;
}

FresnelPair fresnel_continued_fraction(double x) {
  // Modified Lentz evaluation of the complementary error function form:
  // C + jS = (1 + j)/2 * (1 - exp(j pi x^2 / 2) * (1 - j) x * h)
  using cd = std::complex<double>;
  constexpr double kTiny = 1e-300;
  const double pix2 = kPi * x * x;
  cd b(1.0, -pix2);
  cd cc(1.0 / kTiny, 0.0);
  cd d = 1.0 / b;
  cd h = d;
  int n = -1;
  for (int k = 2; k <= kMaxIterations; ++k) {
    n += 2;
    const double a = -static_cast<double>(n) * (n + 1);
    b += 4.0;
    d = 1.0 / (a * d + b);
    cc = b + a / cc;
    const cd del = cc * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  h *= cd(x, -x);
  const cd cs = cd(0.5, 0.5) * (1.0 - std::polar(1.0, half_pi_square_phase(x)) * h);
  return {cs.real(), cs.imag()};
}

}  // namespace

FresnelPair fresnel(double xi) {
  if (!std::isfinite(xi)) throw std::domain_error("fresnel: argument must be finite");
  const double ax = std::abs(xi);
  FresnelPair out = ax <= kSeriesLimit ? fresnel_series(ax) : fresnel_continued_fraction(ax);
  if (xi < 0.0) {
    out.c_val = -out.c_val;
    out.s_val = -out.s_val;
  }
  return out;
}

std::complex<double> fresnel_f(double xi) {
  if (!std::isfinite(xi) || xi < 0.0) {
    throw std::domain_error("fresnel_f: argument must be finite and non-negative");
  }
  if (xi == 0.0) return {1.0, 0.0};
  const auto [c, s] = fresnel(xi);
  return {c / xi, s / xi};
}

double dirichlet_ratio(double u, int n) {
  if (n < 1) throw std::invalid_argument("dirichlet_ratio: n must be >= 1");
  if (!std::isfinite(u)) throw std::domain_error("dirichlet_ratio: argument must be finite");
  const double s = std::sin(u);
  if (std::abs(s) >= 1e-8) return std::sin(n * u) / (n * s);
  // Near u = k pi: ratio -> (-1)^(k (n-1)) (1 - (n^2 - 1) d^2 / 6), d = u - k pi.
  const double k = std::nearbyint(u / kPi);
  const double d = u - k * kPi;
  const auto parity = static_cast<std::int64_t>(std::fmod(std::abs(k) * (n - 1), 2.0));
  const double sign = parity == 0 ? 1.0 : -1.0;
  const double nn = static_cast<double>(n);
  return sign * (1.0 - (nn * nn - 1.0) * d * d / 6.0);
}

double solve_xi_3db() {
  static const double root = [] {
    auto g = [](double xi) { return std::norm(fresnel_f(xi)) - 0.5; };
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(g, 0.5, 2.5, tol, max_iter);
    return 0.5 * (lo + hi);
  }();
  return root;
}

}  // namespace nfis
