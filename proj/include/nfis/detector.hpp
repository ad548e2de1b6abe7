// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nfis/geometry.hpp"
#include "nfis/scene.hpp"
#include "nfis/signal.hpp"
#include "nfis/steering.hpp"

namespace nfis {

struct GridPoint {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  double theta = 0.0;
};

/// Cartesian search grid, row-major with y outer and x inner.
struct SearchGrid {
  Point2 roi_center;
  double width = 0.0;
  double height = 0.0;
  double spacing = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<GridPoint> points;
  std::size_t cardinality() const { return points.size(); }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix);
  }
};

/// (floor(w/s)+1) x (floor(h/s)+1) points starting at the lower-left corner.
/// Throws std::invalid_argument for non-positive spacing or extents.
SearchGrid build_search_grid(Point2 roi_center, double width, double height, double spacing);

struct Candidate {
  double range = 0.0;
  double angle = 0.0;
  double doppler = 0.0;
};

/// |sum_n b_n^* sum_{k,m} x^*[k,m] e^{-j2pi m Ts fD} e^{j2pi k df 2r/c} y_n[k,m]|^2
///   / (|b|^2 |x|^2).
/// Throws std::domain_error for a non-positive range.
double glrt_metric(const ReceivedGrid& received, const SymbolGrid& frame,
                   const Candidate& candidate, const ArrayGeometry& geom,
                   const SystemParams& params, DistanceMode mode = DistanceMode::Exact);

/// Precomputes the symbol/Doppler matched filter once per received grid so a
/// point costs one delay ramp plus N_r dot products.
class GlrtEvaluator {
 public:
  GlrtEvaluator(const ReceivedGrid& received, const SymbolGrid& frame, const SystemParams& params,
                double doppler = 0.0);
  double evaluate(double range, double angle, const ArrayGeometry& geom,
                  DistanceMode mode = DistanceMode::Exact) const;

 private:
  int n_rx_ = 0;
  int n_sub_ = 0;
  double df_ = 0.0;
  double frame_energy_ = 0.0;
  std::vector<cdouble> z_;  // n-major, N_r x K
};

/// -noise_var * ln(far / cardinality). Throws std::invalid_argument unless
/// 0 < far < cardinality.
double glrt_threshold(double noise_var, double far, std::size_t cardinality);

/// Tx scan directions over the angular extent of the grid, step 2/n_tx.
std::vector<double> beam_directions(const SearchGrid& grid, int n_tx);

/// How grid points are tied to the scanned beams.
enum class BeamAssignment { Nearest, MaxOverBeams };

struct DetectorOptions {
  double far = 1.0;
  DistanceMode distance_mode = DistanceMode::Exact;
  BeamAssignment assignment = BeamAssignment::Nearest;
  bool add_noise = true;  // off only for noise-free checks
};

struct RadarMap {
  SearchGrid grid;
  std::vector<double> glrt_values;
  std::vector<int> point_beam;  // beam that produced each value
  std::vector<double> beams;
  double threshold = 0.0;
  double noise_var = 0.0;
  std::vector<std::size_t> detections;
  std::vector<Point2> estimates;
  std::size_t n_exceed = 0;  // threshold crossings before peak picking
};

/// Scans every beam, synthesises one frame per beam with its own noise
/// stream, evaluates the GLRT on the points owned by that beam, thresholds
/// and peak-picks. An empty scatterer list gives a noise-only map.
RadarMap build_radar_map(std::span<const Scatterer> scatterers, const ArrayGeometry& geom,
                         const SystemParams& params, const SymbolGrid& frame,
                         const SearchGrid& grid, const DetectorOptions& options,
                         std::uint64_t noise_seed);

/// Indices above threshold that beat all in-grid 8-neighbours. Equal
/// neighbours are resolved in favour of the lower linear index, and a point
/// whose neighbours are all equal to it is not a peak.
std::vector<std::size_t> peak_pick(std::span<const double> values, const SearchGrid& grid,
                                   double threshold);

/// CSV `x_m,y_m,r_m,theta_rad,glrt,detected`.
void write_radar_map_csv(std::ostream& os, const RadarMap& map);
/// Rows of `trial,beam_idx,x_m,y_m,glrt`; header only when requested.
void write_detections_csv(std::ostream& os, const RadarMap& map, std::size_t trial,
                          bool header = true);

}  // namespace nfis
