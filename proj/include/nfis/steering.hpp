// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "nfis/geometry.hpp"

namespace nfis {

using cdouble = std::complex<double>;

enum class SteeringKind { TxFarField, RxNearField };

/// How element-to-point distances enter the Rx near-field response.
enum class DistanceMode { Exact, Fresnel };

/// Evaluation route for the range-domain Rx array factor.
enum class RangeMethod { DirectSum, FresnelApprox };

struct SteeringVector {
  std::vector<cdouble> entries;
  SteeringKind kind = SteeringKind::TxFarField;

  std::size_t size() const { return entries.size(); }
};

/// Far-field Tx response exp(j pi n~ sin(angle)), n~ = -(N-1)/2 ... (N-1)/2.
SteeringVector tx_steering(double angle, int n_tx);

/// Near-field Rx response (r / r_n) exp(-j 2 pi (r_n - r) / lambda).
/// Throws std::domain_error when range does not clear the Rx half-aperture.
SteeringVector rx_nf_steering(double angle, double range, const ArrayGeometry& geom,
                              DistanceMode mode = DistanceMode::Exact);

// The angular factors below are real: the centred sums are conjugate-symmetric.

/// Normalised Tx array factor steered to steer_angle.
double tx_array_factor(double obs_angle, double steer_angle, int n_tx);

/// ELAS Rx factor under the angular sampling method (spacing n_tx lambda / 2).
double rx_af_angular(double obs_angle, double steer_angle, int n_tx, int n_rx);

/// Tx times Rx angular factor.
double composite_af_angular(double obs_angle, double steer_angle, int n_tx, int n_rx);

/// Pattern of an n-element half-wavelength ULA; the composite factor
/// reduces to this with n = n_tx * n_rx.
double virtual_array_factor(double obs_angle, double steer_angle, int n_elements);

/// Range-domain Rx factor at the steering direction.
///
/// DirectSum evaluates the N_r-term quadratic-phase sum. FresnelApprox uses
/// F(xi) with xi = N_r d_r cos(steer) sqrt(|1/r - 1/r_focus| / (2 lambda)),
/// conjugated when r < r_focus so both routes share the same phase sign.
/// The approximation tracks the sum while xi stays below ~4; past that the
/// discrete sum shows range grating lobes that F(xi) does not model.
cdouble rx_af_range(double obs_range, double focus_range, double steer_angle,
                    const ArrayGeometry& geom, RangeMethod method = RangeMethod::DirectSum);

/// Bandwidth-only range profile sin(K u) / (K sin u), u = 2 pi df (r - r_focus) / c.
double bandwidth_range_profile(double obs_range, double focus_range, int k_subcarriers,
                               double subcarrier_spacing);

/// Bandwidth profile times range-domain Rx factor.
cdouble overall_range_profile(double obs_range, double focus_range, double steer_angle,
                              const ArrayGeometry& geom, int k_subcarriers,
                              double subcarrier_spacing,
                              RangeMethod method = RangeMethod::DirectSum);

/// Full width of the contiguous region around `center` where
/// power(x) >= 0.5 * power(center), found by stepping outward by `step`
/// (at most `max_half_span` each side) and refining each crossing by
/// linear interpolation.
double half_power_width(const std::function<double(double)>& power, double center, double step,
                        double max_half_span);

/// CSV `axis_value,re,im,mag_db`, mag_db = 20 log10|v| clamped at -120 dB.
void write_profile_csv(std::ostream& os, std::span<const double> axis,
                       std::span<const cdouble> values);

}  // namespace nfis
