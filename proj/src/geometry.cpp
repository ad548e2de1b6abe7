// SPDX-License-Identifier: Apache-2.0
#include "nfis/geometry.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nfis/constants.hpp"
#include "nfis/io.hpp"
#include "nfis/special_math.hpp"

namespace nfis {

double norm(Point2 p) { return std::hypot(p.x, p.y); }

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

ArrayGeometry build_array(SpacingMode mode, int n_tx, int n_rx, double carrier_hz) {
  if (n_tx < 2 || n_rx < 2) {
    throw std::invalid_argument("array geometry: n_tx and n_rx must be >= 2");
  }
  if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz)) {
    throw std::invalid_argument("array geometry: carrier frequency must be positive");
  }
  ArrayGeometry g;
  g.n_tx_ = n_tx;
  g.n_rx_ = n_rx;
  g.mode_ = mode;
  g.carrier_hz_ = carrier_hz;
  g.wavelength_ = kSpeedOfLight / carrier_hz;
  g.d_tx_ = g.wavelength_ / 2.0;
  g.d_rx_ = mode == SpacingMode::Elas ? n_tx * (g.wavelength_ / 2.0) : g.wavelength_ / 2.0;
  g.rx_positions_.reserve(static_cast<std::size_t>(n_rx));
  for (int n = 1; n <= n_rx; ++n) {
    const double n_tilde = (2.0 * n - n_rx - 1.0) / 2.0;
    g.rx_positions_.push_back({0.0, n_tilde * g.d_rx_});
  }
  return g;
}

ArrayGeometry build_elas(int n_tx, int n_rx, double carrier_hz) {
  return build_array(SpacingMode::Elas, n_tx, n_rx, carrier_hz);
}

ArrayGeometry build_half_wavelength(int n_tx, int n_rx, double carrier_hz) {
  return build_array(SpacingMode::HalfWavelength, n_tx, n_rx, carrier_hz);
}

double fraunhofer_distance(double aperture, double wavelength) {
  if (!(aperture > 0.0) || !(wavelength > 0.0)) {
    throw std::domain_error("fraunhofer_distance: aperture and wavelength must be positive");
  }
  return 2.0 * aperture * aperture / wavelength;
}

double max_focus_distance(const ArrayGeometry& geom, double steer_angle, double xi_3db) {
  if (!(std::abs(steer_angle) < kPi / 2)) {
    throw std::domain_error("max_focus_distance: |steer_angle| must be < pi/2");
  }
  if (!(xi_3db > 0.0)) throw std::domain_error("max_focus_distance: xi_3db must be positive");
  const double span = geom.n_rx() * geom.d_rx() * std::cos(steer_angle);
  return span * span / (2.0 * geom.wavelength() * xi_3db * xi_3db);
}

double max_focus_large_n(const ArrayGeometry& geom, double xi_3db) {
  return fraunhofer_distance(geom.aperture_rx(), geom.wavelength()) / (4.0 * xi_3db * xi_3db);
}

double depth_of_focus(double focus_range, double max_focus) {
  if (!(focus_range > 0.0)) throw std::domain_error("depth_of_focus: focus_range must be positive");
  if (focus_range >= max_focus) return std::numeric_limits<double>::infinity();
  const double r2 = focus_range * focus_range;
  return 2.0 * r2 * max_focus / (max_focus * max_focus - r2);
}

double bandwidth_resolution(double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::domain_error("bandwidth must be positive");
  return kSpeedOfLight / (2.0 * bandwidth);
}

double super_resolution_radius(double bandwidth, double max_focus) {
  if (!(bandwidth > 0.0) || !(max_focus > 0.0)) {
    throw std::domain_error("super_resolution_radius: bandwidth and max_focus must be positive");
  }
  return std::sqrt(max_focus * max_focus / (4.0 * bandwidth * max_focus / kSpeedOfLight + 1.0));
}

double range_resolution(double focus_range, double bandwidth, double max_focus) {
  if (!(focus_range > 0.0)) {
    throw std::domain_error("range_resolution: focus_range must be positive");
  }
  if (focus_range < super_resolution_radius(bandwidth, max_focus)) {
    return depth_of_focus(focus_range, max_focus);
  }
  return bandwidth_resolution(bandwidth);
}

NearFieldScales near_field_scales(const ArrayGeometry& geom, double steer_angle, double xi_3db) {
  NearFieldScales s;
  s.xi_3db = xi_3db > 0.0 ? xi_3db : solve_xi_3db();
  s.fraunhofer_rx = fraunhofer_distance(geom.aperture_rx(), geom.wavelength());
  s.max_focus = max_focus_distance(geom, steer_angle, s.xi_3db);
  return s;
}

double exact_distance(Point2 point, Point2 element) { return distance(point, element); }

double fresnel_distance(double range, double angle, double element_offset) {
  if (!(range > 0.0)) throw std::domain_error("fresnel_distance: range must be positive");
  const double c = element_offset * std::cos(angle);
  return range - element_offset * std::sin(angle) + c * c / (2.0 * range);
}

namespace {

std::vector<double> periodic_directions(double steer_angle, double period_in_sine) {
  std::vector<double> out;
  const double s0 = std::sin(steer_angle);
  const auto i_max = static_cast<int>(std::ceil(2.0 / period_in_sine)) + 1;
  for (int i = -i_max; i <= i_max; ++i) {
    if (i == 0) continue;
    const double arg = s0 + i * period_in_sine;
    if (std::abs(arg) < 1.0) out.push_back(std::asin(arg));
  }
  return out;
}

}  // namespace

std::vector<double> rx_grating_lobe_angles(const ArrayGeometry& geom, double steer_angle) {
  return periodic_directions(steer_angle, geom.wavelength() / geom.d_rx());
}

std::vector<double> tx_notch_angles(const ArrayGeometry& geom, double steer_angle) {
  return periodic_directions(steer_angle, geom.wavelength() / (geom.n_tx() * geom.d_tx()));
}

ResolutionMap range_resolution_map(const ArrayGeometry& geom, double bandwidth,
                                   const Region& region, double step, FocusAngleMode mode,
                                   double xi_3db) {
  if (!(step > 0.0)) throw std::domain_error("range_resolution_map: step must be positive");
  if (!(region.x_max > region.x_min) || !(region.y_max > region.y_min)) {
    throw std::domain_error("range_resolution_map: degenerate region");
  }
  const double xi = xi_3db > 0.0 ? xi_3db : solve_xi_3db();
  const auto nx = static_cast<std::size_t>(std::floor((region.x_max - region.x_min) / step + 1e-9));
  const auto ny = static_cast<std::size_t>(std::floor((region.y_max - region.y_min) / step + 1e-9));
  if (nx == 0 || ny == 0) throw std::domain_error("range_resolution_map: step exceeds region");

  ResolutionMap map;
  map.bandwidth = bandwidth;
  map.step = step;
  map.xs.resize(nx);
  map.ys.resize(ny);
  for (std::size_t i = 0; i < nx; ++i) map.xs[i] = region.x_min + (i + 0.5) * step;
  for (std::size_t j = 0; j < ny; ++j) map.ys[j] = region.y_min + (j + 0.5) * step;

  const double broadside_focus = max_focus_distance(geom, 0.0, xi);
  map.delta_r.resize(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = map.xs[i];
      const double y = map.ys[j];
      const double r = std::hypot(x, y);
      double focus = broadside_focus;
      if (mode == FocusAngleMode::PerCell) {
        const double theta = std::atan2(y, x);
        // Cells behind or level with the array plane see no focusing gain.
        focus = std::abs(theta) < kPi / 2 ? max_focus_distance(geom, theta, xi) : 0.0;
      }
      map.delta_r[j * nx + i] =
          focus > 0.0 ? range_resolution(r, bandwidth, focus) : bandwidth_resolution(bandwidth);
    }
  }
  return map;
}

void write_resolution_map_csv(std::ostream& os, const ResolutionMap& map) {
  os << "x_m,y_m,delta_r_m\n";
  for (std::size_t j = 0; j < map.ny(); ++j) {
    for (std::size_t i = 0; i < map.nx(); ++i) {
      os << format_number(map.xs[i]) << ',' << format_number(map.ys[j]) << ','
         << format_number(map.at(i, j)) << '\n';
    }
  }
}

}  // namespace nfis
