// SPDX-License-Identifier: Apache-2.0
#include "nfis/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "nfis/constants.hpp"
#include "nfis/errors.hpp"
#include "nfis/steering.hpp"

namespace nfis {
namespace {

int whole_cells(double extent, double cell, const char* what) {
  const double ratio = extent / cell;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError(std::string("target ") + what + " is not a whole number of cells");
  }
  return static_cast<int>(rounded);
}

}  // namespace

ExtendedTarget build_target(Point2 centroid, double length, double width, double heading,
                            double cell_size, double activation_prob) {
  if (!(cell_size > 0.0)) throw ConfigError("target cell size must be positive");
  if (!(activation_prob >= 0.0 && activation_prob <= 1.0)) {
    throw ConfigError("target activation probability must lie in [0, 1]");
  }
  const int n_len = whole_cells(length, cell_size, "length");
  const int n_wid = whole_cells(width, cell_size, "width");

  ExtendedTarget t;
  t.centroid = centroid;
  t.length = length;
  t.width = width;
  t.heading = heading;
  t.cell_size = cell_size;
  t.activation_prob = activation_prob;
  t.cells.reserve(static_cast<std::size_t>(n_len) * n_wid);
  const double ch = std::cos(heading);
  const double sh = std::sin(heading);
  for (int i = 0; i < n_len; ++i) {
    const double u = (i + 0.5) * cell_size - length / 2.0;
    for (int j = 0; j < n_wid; ++j) {
      const double v = (j + 0.5) * cell_size - width / 2.0;
      t.cells.push_back({centroid.x + u * ch - v * sh, centroid.y + u * sh + v * ch});
    }
  }
  return t;
}

bool target_contains(const ExtendedTarget& target, Point2 p, double tol) {
  const double dx = p.x - target.centroid.x;
  const double dy = p.y - target.centroid.y;
  const double u = dx * std::cos(target.heading) + dy * std::sin(target.heading);
  const double v = -dx * std::sin(target.heading) + dy * std::cos(target.heading);
  return std::abs(u) <= target.length / 2.0 + tol && std::abs(v) <= target.width / 2.0 + tol;
}

std::complex<double> channel_coefficient(double range, double rcs, double carrier_hz) {
  if (!(range > 0.0)) throw std::domain_error("channel_coefficient: range must be positive");
  const double four_pi = 4.0 * kPi;
  const double amplitude =
      std::sqrt(rcs * kSpeedOfLight * kSpeedOfLight /
                (four_pi * four_pi * four_pi * carrier_hz * carrier_hz * std::pow(range, 4)));
  // 2 pi fc tau = 2 pi (2 r / lambda); keep only the fractional cycle count.
  const double cycles = 2.0 * range * carrier_hz / kSpeedOfLight;
  const double frac = cycles - std::floor(cycles);
  return std::polar(amplitude, -2.0 * kPi * frac);
}

Scatterer make_scatterer(Point2 position, double rcs, double carrier_hz, double doppler) {
  Scatterer s;
  s.position = position;
  s.range_ref = norm(position);
  s.angle_ref = std::atan2(position.y, position.x);
  s.delay = 2.0 * s.range_ref / kSpeedOfLight;
  s.doppler = doppler;
  s.rcs = rcs;
  s.channel_coeff = channel_coefficient(s.range_ref, rcs, carrier_hz);
  return s;
}

std::vector<Scatterer> sample_scatterers(const ExtendedTarget& target, std::uint64_t seed,
                                         double rcs, double carrier_hz) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution active(target.activation_prob);
  std::vector<Scatterer> out;
  for (const auto& cell : target.cells) {
    if (active(rng)) out.push_back(make_scatterer(cell, rcs, carrier_hz));
  }
  return out;
}

std::complex<double> effective_gain(const Scatterer& scatterer,
                                    std::span<const std::complex<double>> tx_weights) {
  double power = 0.0;
  for (const auto& w : tx_weights) power += std::norm(w);
  if (tx_weights.empty() || std::abs(power - 1.0) > 1e-9) {
    throw std::invalid_argument("effective_gain: tx weights must have unit norm");
  }
  const auto a = tx_steering(scatterer.angle_ref, static_cast<int>(tx_weights.size()));
  std::complex<double> g{0.0, 0.0};
  for (std::size_t i = 0; i < tx_weights.size(); ++i) g += std::conj(a.entries[i]) * tx_weights[i];
  return g * scatterer.channel_coeff;
}

Point2 barycenter(std::span<const Point2> points) {
  if (points.empty()) throw std::domain_error("barycenter of an empty set");
  Point2 acc;
  for (const auto& p : points) {
    acc.x += p.x;
    acc.y += p.y;
  }
  const auto n = static_cast<double>(points.size());
  return {acc.x / n, acc.y / n};
}

std::vector<Point2> positions_of(std::span<const Scatterer> scatterers) {
  std::vector<Point2> out;
  out.reserve(scatterers.size());
  for (const auto& s : scatterers) out.push_back(s.position);
  return out;
}

}  // namespace nfis
