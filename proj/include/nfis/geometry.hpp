// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace nfis {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double norm(Point2 p);
double distance(Point2 a, Point2 b);

/// Rx element spacing rule. Elas spaces the Rx at n_tx * lambda / 2 so the
/// Rx grating lobes fall on the Tx notches; HalfWavelength is the dense
/// conventional baseline.
enum class SpacingMode { Elas, HalfWavelength };

/// Co-located Tx/Rx ULAs along the y axis, centred on the origin.
/// Immutable once built; use build_elas / build_half_wavelength.
class ArrayGeometry {
 public:
  int n_tx() const { return n_tx_; }
  int n_rx() const { return n_rx_; }
  double d_tx() const { return d_tx_; }
  double d_rx() const { return d_rx_; }
  double wavelength() const { return wavelength_; }
  double carrier_hz() const { return carrier_hz_; }
  SpacingMode mode() const { return mode_; }
  const std::vector<Point2>& rx_positions() const { return rx_positions_; }

  /// Offset n~ * d_rx of Rx element n (0-based) along y.
  double rx_offset(int n) const { return rx_positions_[static_cast<std::size_t>(n)].y; }

  double aperture_tx() const { return (n_tx_ - 1) * d_tx_; }
  double aperture_rx() const { return (n_rx_ - 1) * d_rx_; }

 private:
  friend ArrayGeometry build_array(SpacingMode, int, int, double);
  ArrayGeometry() = default;

  int n_tx_ = 0;
  int n_rx_ = 0;
  double d_tx_ = 0.0;
  double d_rx_ = 0.0;
  double wavelength_ = 0.0;
  double carrier_hz_ = 0.0;
  SpacingMode mode_ = SpacingMode::Elas;
  std::vector<Point2> rx_positions_;
};

/// Throws std::invalid_argument for counts < 2 or a non-positive carrier.
ArrayGeometry build_array(SpacingMode mode, int n_tx, int n_rx, double carrier_hz);
ArrayGeometry build_elas(int n_tx, int n_rx, double carrier_hz);
ArrayGeometry build_half_wavelength(int n_tx, int n_rx, double carrier_hz);

/// 2 D^2 / lambda. Throws std::domain_error for non-positive inputs.
double fraunhofer_distance(double aperture, double wavelength);

/// Maximum focusing distance N_r^2 d_r^2 cos^2(steer) / (2 lambda xi^2).
double max_focus_distance(const ArrayGeometry& geom, double steer_angle, double xi_3db);

/// Broadside, large-N_r approximation D_F^rx / (4 xi^2).
double max_focus_large_n(const ArrayGeometry& geom, double xi_3db);

/// Half-power depth of focus when focusing at focus_range; +inf once
/// focus_range reaches max_focus.
double depth_of_focus(double focus_range, double max_focus);

/// c / (2B).
double bandwidth_resolution(double bandwidth);

/// Radius inside which near-field focusing beats the bandwidth limit.
double super_resolution_radius(double bandwidth, double max_focus);

/// DF(r) inside the super-resolution radius, c/(2B) from it outwards.
double range_resolution(double focus_range, double bandwidth, double max_focus);

struct NearFieldScales {
  double fraunhofer_rx = 0.0;
  double max_focus = 0.0;
  double xi_3db = 0.0;
  double super_res_radius(double bandwidth) const {
    return super_resolution_radius(bandwidth, max_focus);
  }
};

/// Scales for focusing toward steer_angle. xi_3db <= 0 selects the solved root.
NearFieldScales near_field_scales(const ArrayGeometry& geom, double steer_angle = 0.0,
                                  double xi_3db = 0.0);

/// Exact element-to-point distance.
double exact_distance(Point2 point, Point2 element);

/// Second-order (Fresnel) distance from a point at (range, angle) to an
/// element offset along y.
double fresnel_distance(double range, double angle, double element_offset);

/// Rx grating-lobe directions arcsin(sin(steer) + i lambda / d_rx), i != 0.
std::vector<double> rx_grating_lobe_angles(const ArrayGeometry& geom, double steer_angle);

/// Tx pattern nulls arcsin(sin(steer) + i lambda / (n_tx d_tx)), i != 0,
/// restricted to the visible region.
std::vector<double> tx_notch_angles(const ArrayGeometry& geom, double steer_angle);

struct Region {
  double x_min = 0.0;
  double x_max = 20.0;
  double y_min = -10.0;
  double y_max = 10.0;
};

/// Which steering angle feeds the maximum focusing distance of a map cell.
enum class FocusAngleMode { PerCell, Broadside };

/// Range-resolution values at cell centres, row-major (y outer, x inner).
struct ResolutionMap {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> delta_r;
  double bandwidth = 0.0;
  double step = 0.0;

  std::size_t nx() const { return xs.size(); }
  std::size_t ny() const { return ys.size(); }
  double at(std::size_t ix, std::size_t iy) const { return delta_r[iy * nx() + ix]; }
};

ResolutionMap range_resolution_map(const ArrayGeometry& geom, double bandwidth,
                                   const Region& region, double step,
                                   FocusAngleMode mode = FocusAngleMode::PerCell,
                                   double xi_3db = 0.0);

/// CSV `x_m,y_m,delta_r_m`, 6 significant digits.
void write_resolution_map_csv(std::ostream& os, const ResolutionMap& map);

}  // namespace nfis
