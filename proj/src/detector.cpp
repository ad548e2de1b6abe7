// SPDX-License-Identifier: Apache-2.0
#include "nfis/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nfis/constants.hpp"
#include "nfis/io.hpp"
#include "nfis/random.hpp"

namespace nfis {

SearchGrid build_search_grid(Point2 roi_center, double width, double height, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("search grid spacing must be positive");
  if (!(width >= 0.0) || !(height >= 0.0)) {
    throw std::invalid_argument("search grid extents must be non-negative");
  }
  SearchGrid g;
  g.roi_center = roi_center;
  g.width = width;
  g.height = height;
  g.spacing = spacing;
  // 3.0 / 0.1 lands a hair under 30 in binary; nudge before flooring.
  g.nx = static_cast<int>(std::floor(width / spacing + 1e-9)) + 1;
  g.ny = static_cast<int>(std::floor(height / spacing + 1e-9)) + 1;
  const double x0 = roi_center.x - width / 2.0;
  const double y0 = roi_center.y - height / 2.0;
  g.points.reserve(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny));
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      GridPoint p;
      p.x = x0 + ix * spacing;
      p.y = y0 + iy * spacing;
      p.r = std::hypot(p.x, p.y);
      p.theta = std::atan2(p.y, p.x);
      g.points.push_back(p);
    }
  }
  return g;
}

namespace {

// Fractional cycles keep the phase argument small before polar().
cdouble unit_phasor(double cycles) {
  return std::polar(1.0, 2.0 * kPi * (cycles - std::floor(cycles)));
}

}  // namespace

double glrt_metric(const ReceivedGrid& received, const SymbolGrid& frame,
                   const Candidate& candidate, const ArrayGeometry& geom,
                   const SystemParams& params, DistanceMode mode) {
  if (!(candidate.range > 0.0)) throw std::domain_error("glrt_metric: range must be positive");
  if (received.n_rx != geom.n_rx() || received.n_subcarriers != frame.n_subcarriers ||
      received.n_symbols != frame.n_symbols) {
    throw std::invalid_argument("glrt_metric: dimension mismatch");
  }
  const auto b = rx_nf_steering(candidate.angle, candidate.range, geom, mode);
  const double df = params.subcarrier_spacing();
  const double ts = params.symbol_duration();
  const double tau = 2.0 * candidate.range / kSpeedOfLight;
  cdouble acc{0.0, 0.0};
  double b_energy = 0.0;
  for (int n = 0; n < received.n_rx; ++n) {
    cdouble inner{0.0, 0.0};
    for (int k = 0; k < received.n_subcarriers; ++k) {
      const cdouble delay = unit_phasor(k * df * tau);
      for (int m = 0; m < received.n_symbols; ++m) {
        const cdouble dop = unit_phasor(-m * ts * candidate.doppler);
        inner += std::conj(frame.at(k, m)) * dop * delay * received.at(n, k, m);
      }
    }
    acc += std::conj(b.entries[n]) * inner;
    b_energy += std::norm(b.entries[n]);
  }
  return std::norm(acc) / (b_energy * frame.energy());
}

GlrtEvaluator::GlrtEvaluator(const ReceivedGrid& received, const SymbolGrid& frame,
                             const SystemParams& params, double doppler)
    : n_rx_(received.n_rx),
      n_sub_(received.n_subcarriers),
      df_(params.subcarrier_spacing()),
      frame_energy_(frame.energy()) {
  if (received.n_subcarriers != frame.n_subcarriers || received.n_symbols != frame.n_symbols) {
    throw std::invalid_argument("GlrtEvaluator: frame and received grid disagree");
  }
  const int M = received.n_symbols;
  std::vector<cdouble> dop(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) dop[m] = unit_phasor(-m * params.symbol_duration() * doppler);
  z_.assign(static_cast<std::size_t>(n_rx_) * n_sub_, cdouble{0.0, 0.0});
  for (int n = 0; n < n_rx_; ++n) {
    for (int k = 0; k < n_sub_; ++k) {
      cdouble s{0.0, 0.0};
      for (int m = 0; m < M; ++m) s += std::conj(frame.at(k, m)) * dop[m] * received.at(n, k, m);
      z_[static_cast<std::size_t>(n) * n_sub_ + k] = s;
    }
  }
}

double GlrtEvaluator::evaluate(double range, double angle, const ArrayGeometry& geom,
                               DistanceMode mode) const {
  if (!(range > 0.0)) throw std::domain_error("GlrtEvaluator: range must be positive");
  if (geom.n_rx() != n_rx_) throw std::invalid_argument("GlrtEvaluator: geometry mismatch");
  const auto b = rx_nf_steering(angle, range, geom, mode);
  const cdouble w = unit_phasor(df_ * 2.0 * range / kSpeedOfLight);
  cdouble acc{0.0, 0.0};
  double b_energy = 0.0;
  for (int n = 0; n < n_rx_; ++n) {
    const cdouble* z = &z_[static_cast<std::size_t>(n) * n_sub_];
    // Horner in w: sum_k z[k] w^k.
    cdouble s{0.0, 0.0};
    for (int k = n_sub_ - 1; k >= 0; --k) s = s * w + z[k];
    acc += std::conj(b.entries[n]) * s;
    b_energy += std::norm(b.entries[n]);
  }
  return std::norm(acc) / (b_energy * frame_energy_);
}

double glrt_threshold(double noise_var, double far, std::size_t cardinality) {
  const double card = static_cast<double>(cardinality);
  if (!(far > 0.0) || !(far < card)) {
    throw std::invalid_argument("glrt_threshold: need 0 < far < grid cardinality");
  }
  return -noise_var * std::log(far / card);
}

std::vector<double> beam_directions(const SearchGrid& grid, int n_tx) {
  if (grid.points.empty()) throw std::invalid_argument("beam_directions: empty grid");
  if (n_tx < 1) throw std::invalid_argument("beam_directions: n_tx must be positive");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : grid.points) {
    lo = std::min(lo, p.theta);
    hi = std::max(hi, p.theta);
  }
  const double step = 2.0 / n_tx;
  const double extent = hi - lo;
  if (extent < step) return {0.5 * (lo + hi)};
  const int n = static_cast<int>(std::ceil(extent / step - 1e-12)) + 1;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + extent * i / (n - 1);
  return out;
}

RadarMap build_radar_map(std::span<const Scatterer> scatterers, const ArrayGeometry& geom,
                         const SystemParams& params, const SymbolGrid& frame,
                         const SearchGrid& grid, const DetectorOptions& options,
                         std::uint64_t noise_seed) {
  RadarMap map;
  map.grid = grid;
  map.beams = beam_directions(grid, geom.n_tx());
  const std::size_t card = grid.cardinality();
  map.glrt_values.assign(card, -std::numeric_limits<double>::infinity());
  map.point_beam.assign(card, -1);

  const int n_beams = static_cast<int>(map.beams.size());
  std::vector<int> owner(card, 0);
  for (std::size_t i = 0; i < card; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int q = 0; q < n_beams; ++q) {
      const double d = std::abs(grid.points[i].theta - map.beams[q]);
      if (d < best) {
        best = d;
        owner[i] = q;
      }
    }
  }

  SynthesisOptions synth;
  synth.add_noise = options.add_noise;
  synth.allow_empty = true;
  synth.distance_mode = DistanceMode::Exact;
  const double amp_norm = 1.0 / std::sqrt(static_cast<double>(geom.n_tx()));

  for (int q = 0; q < n_beams; ++q) {
    auto w = tx_steering(map.beams[q], geom.n_tx()).entries;
    for (auto& v : w) v *= amp_norm;
    const auto y = synthesize_received(scatterers, w, geom, frame, params,
                                       derive_seed({noise_seed, static_cast<std::uint64_t>(q)}),
                                       synth);
    map.noise_var = y.noise_var;
    const GlrtEvaluator eval(y, frame, params, 0.0);
    for (std::size_t i = 0; i < card; ++i) {
      if (options.assignment == BeamAssignment::Nearest && owner[i] != q) continue;
      const auto& p = grid.points[i];
      const double v = eval.evaluate(p.r, p.theta, geom, options.distance_mode);
      if (v > map.glrt_values[i]) {
        map.glrt_values[i] = v;
        map.point_beam[i] = q;
      }
    }
  }
  if (n_beams == 0 || card == 0) return map;

  map.threshold = glrt_threshold(map.noise_var, options.far, card);
  map.n_exceed = static_cast<std::size_t>(
      std::count_if(map.glrt_values.begin(), map.glrt_values.end(),
                    [&](double v) { return v > map.threshold; }));
  map.detections = peak_pick(map.glrt_values, grid, map.threshold);
  map.estimates.reserve(map.detections.size());
  for (auto i : map.detections) map.estimates.push_back({grid.points[i].x, grid.points[i].y});
  return map;
}

std::vector<std::size_t> peak_pick(std::span<const double> values, const SearchGrid& grid,
                                   double threshold) {
  if (values.size() != grid.cardinality()) {
    throw std::invalid_argument("peak_pick: values not aligned to grid");
  }
  std::vector<std::size_t> out;
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const std::size_t i = grid.index(ix, iy);
      const double v = values[i];
      if (!(v > threshold)) continue;
      bool peak = true;
      bool any_neighbour = false;
      bool any_lower = false;
      for (int dy = -1; dy <= 1 && peak; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int jx = ix + dx;
          const int jy = iy + dy;
          if (jx < 0 || jy < 0 || jx >= grid.nx || jy >= grid.ny) continue;
          any_neighbour = true;
          const std::size_t j = grid.index(jx, jy);
          const double u = values[j];
          if (v > u) {
            any_lower = true;
          } else if (!(v == u && i < j)) {
            peak = false;
            break;
          }
        }
      }
      if (peak && (any_lower || !any_neighbour)) out.push_back(i);
    }
  }
  return out;
}

void write_radar_map_csv(std::ostream& os, const RadarMap& map) {
  std::vector<char> detected(map.grid.cardinality(), 0);
  for (auto i : map.detections) detected[i] = 1;
  os << "x_m,y_m,r_m,theta_rad,glrt,detected\n";
  for (std::size_t i = 0; i < map.grid.cardinality(); ++i) {
    const auto& p = map.grid.points[i];
    os << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(p.r, 9) << ','
       << format_number(p.theta, 9) << ',' << format_number(map.glrt_values[i], 9) << ','
       << static_cast<int>(detected[i]) << '\n';
  }
}

void write_detections_csv(std::ostream& os, const RadarMap& map, std::size_t trial, bool header) {
  if (header) os << "trial,beam_idx,x_m,y_m,glrt\n";
  for (auto i : map.detections) {
    const auto& p = map.grid.points[i];
    os << trial << ',' << map.point_beam[i] << ',' << format_number(p.x) << ','
       << format_number(p.y) << ',' << format_number(map.glrt_values[i], 9) << '\n';
  }
}

}  // namespace nfis
