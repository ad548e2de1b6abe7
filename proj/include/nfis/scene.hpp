// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "nfis/geometry.hpp"

namespace nfis {

/// Rectangular L x W target split into square cells; each cell hosts a
/// scatterer with probability activation_prob in any one realisation.
struct ExtendedTarget {
  Point2 centroid;
  double length = 0.0;   // along heading
  double width = 0.0;
  double heading = 0.0;  // angle of the long axis from +x
  double cell_size = 0.0;
  double activation_prob = 0.0;
  std::vector<Point2> cells;  // cell centres
};

/// Throws ConfigError when L or W is not a whole number of cells, or for a
/// probability outside [0, 1].
ExtendedTarget build_target(Point2 centroid, double length, double width, double heading,
                            double cell_size, double activation_prob);

/// True when p lies inside the rotated rectangle (tolerance in metres).
bool target_contains(const ExtendedTarget& target, Point2 p, double tol = 1e-9);

struct Scatterer {
  Point2 position;
  double range_ref = 0.0;  // to the array centre
  double angle_ref = 0.0;
  double delay = 0.0;      // 2 r / c
  double doppler = 0.0;
  double rcs = 0.0;
  std::complex<double> channel_coeff;  // radar-equation amplitude, carrier phase
};

/// sqrt(rcs c^2 / ((4 pi)^3 fc^2 r^4)) exp(-j 2 pi fc 2r/c).
std::complex<double> channel_coefficient(double range, double rcs, double carrier_hz);

Scatterer make_scatterer(Point2 position, double rcs, double carrier_hz, double doppler = 0.0);

/// Independent Bernoulli activation of every cell, in cell order.
std::vector<Scatterer> sample_scatterers(const ExtendedTarget& target, std::uint64_t seed,
                                         double rcs, double carrier_hz);

/// h_p = (a^H(theta_p) w_t) eps_p. tx_weights must have unit norm.
std::complex<double> effective_gain(const Scatterer& scatterer,
                                    std::span<const std::complex<double>> tx_weights);

Point2 barycenter(std::span<const Point2> points);
std::vector<Point2> positions_of(std::span<const Scatterer> scatterers);

}  // namespace nfis
