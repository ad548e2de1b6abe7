// SPDX-License-Identifier: Apache-2.0
#include "nfis/steering.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "nfis/constants.hpp"
#include "nfis/io.hpp"
#include "nfis/special_math.hpp"

namespace nfis {

SteeringVector tx_steering(double angle, int n_tx) {
  if (n_tx < 1) throw std::invalid_argument("tx_steering: n_tx must be >= 1");
  SteeringVector v;
  v.kind = SteeringKind::TxFarField;
  v.entries.reserve(static_cast<std::size_t>(n_tx));
  const double s = std::sin(angle);
  for (int i = 0; i < n_tx; ++i) {
    const double n_tilde = i - (n_tx - 1) / 2.0;
    v.entries.push_back(std::polar(1.0, kPi * n_tilde * s));
  }
  return v;
}

SteeringVector rx_nf_steering(double angle, double range, const ArrayGeometry& geom,
                              DistanceMode mode) {
  if (!(range > 0.0) || !(range > geom.aperture_rx() / 2.0)) {
    throw std::domain_error("rx_nf_steering: range must exceed the Rx half-aperture");
  }
  SteeringVector v;
  v.kind = SteeringKind::RxNearField;
  v.entries.reserve(static_cast<std::size_t>(geom.n_rx()));
  const Point2 point{range * std::cos(angle), range * std::sin(angle)};
  const double k0 = 2.0 * kPi / geom.wavelength();
  for (const auto& element : geom.rx_positions()) {
    const double rn = mode == DistanceMode::Exact ? exact_distance(point, element)
                                                  : fresnel_distance(range, angle, element.y);
    v.entries.push_back(std::polar(range / rn, -k0 * (rn - range)));
  }
  return v;
}

double tx_array_factor(double obs_angle, double steer_angle, int n_tx) {
  const double u = kPi / 2.0 * (std::sin(obs_angle) - std::sin(steer_angle));
  return dirichlet_ratio(u, n_tx);
}

double rx_af_angular(double obs_angle, double steer_angle, int n_tx, int n_rx) {
  const double u = n_tx * kPi / 2.0 * (std::sin(obs_angle) - std::sin(steer_angle));
  return dirichlet_ratio(u, n_rx);
}

double composite_af_angular(double obs_angle, double steer_angle, int n_tx, int n_rx) {
  return tx_array_factor(obs_angle, steer_angle, n_tx) *
         rx_af_angular(obs_angle, steer_angle, n_tx, n_rx);
}

double virtual_array_factor(double obs_angle, double steer_angle, int n_elements) {
  return tx_array_factor(obs_angle, steer_angle, n_elements);
}

cdouble rx_af_range(double obs_range, double focus_range, double steer_angle,
                    const ArrayGeometry& geom, RangeMethod method) {
  if (!(obs_range > 0.0) || !(focus_range > 0.0)) {
    throw std::domain_error("rx_af_range: ranges must be positive");
  }
  const double cos_steer = std::cos(steer_angle);
  const double inv_diff = 1.0 / obs_range - 1.0 / focus_range;
  if (method == RangeMethod::FresnelApprox) {
    const double xi = geom.n_rx() * geom.d_rx() * std::abs(cos_steer) *
                      std::sqrt(std::abs(inv_diff) / (2.0 * geom.wavelength()));
    const cdouble f = fresnel_f(xi);
    return inv_diff > 0.0 ? std::conj(f) : f;
  }
  // Element n contributes exp(-j pi (n~ d_r cos)^2 (1/r - 1/r_focus) / lambda).
  const double alpha = kPi * geom.d_rx() * geom.d_rx() * cos_steer * cos_steer * inv_diff /
                       geom.wavelength();
  cdouble acc{0.0, 0.0};
  const int n_rx = geom.n_rx();
  for (int i = 0; i < n_rx; ++i) {
    const double n_tilde = i - (n_rx - 1) / 2.0;
    acc += std::polar(1.0, -alpha * n_tilde * n_tilde);
  }
  return acc / static_cast<double>(n_rx);
}

double bandwidth_range_profile(double obs_range, double focus_range, int k_subcarriers,
                               double subcarrier_spacing) {
  if (k_subcarriers < 1) throw std::invalid_argument("bandwidth_range_profile: K must be >= 1");
  if (!(subcarrier_spacing > 0.0)) {
    throw std::invalid_argument("bandwidth_range_profile: spacing must be positive");
  }
  const double u = 2.0 * kPi * subcarrier_spacing * (obs_range - focus_range) / kSpeedOfLight;
  return dirichlet_ratio(u, k_subcarriers);
}

cdouble overall_range_profile(double obs_range, double focus_range, double steer_angle,
                              const ArrayGeometry& geom, int k_subcarriers,
                              double subcarrier_spacing, RangeMethod method) {
  return bandwidth_range_profile(obs_range, focus_range, k_subcarriers, subcarrier_spacing) *
         rx_af_range(obs_range, focus_range, steer_angle, geom, method);
}

double half_power_width(const std::function<double(double)>& power, double center, double step,
                        double max_half_span) {
  if (!(step > 0.0)) throw std::invalid_argument("half_power_width: step must be positive");
  const double level = 0.5 * power(center);
  auto edge = [&](double direction) {
    double prev_x = center;
    double prev_p = power(center);
    for (double offset = step; offset <= max_half_span + 0.5 * step; offset += step) {
      const double x = center + direction * offset;
      const double p = power(x);
      if (p < level) {
        const double t = (prev_p - level) / (prev_p - p);
        return prev_x + t * (x - prev_x);
      }
      prev_x = x;
      prev_p = p;
    }
    return center + direction * max_half_span;
  };
  return edge(1.0) - edge(-1.0);
}

void write_profile_csv(std::ostream& os, std::span<const double> axis,
                       std::span<const cdouble> values) {
  if (axis.size() != values.size()) {
    throw std::invalid_argument("write_profile_csv: axis and values differ in length");
  }
  os << "axis_value,re,im,mag_db\n";
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double mag = std::abs(values[i]);
    const double db = mag > 0.0 ? std::max(20.0 * std::log10(mag), -120.0) : -120.0;
    os << format_number(axis[i], 12) << ',' << format_number(values[i].real(), 10) << ','
       << format_number(values[i].imag(), 10) << ',' << format_number(db, 6) << '\n';
  }
}

}  // namespace nfis
