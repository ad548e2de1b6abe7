// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nfis/detector.hpp"
#include "nfis/geometry.hpp"
#include "nfis/scene.hpp"
#include "nfis/signal.hpp"

namespace nfis {

/// Standard alpha = 2 GOSPA with cut-off c (gate) and order p.
struct GospaParams {
  double gate = 0.5;
  double order = 2.0;
  double alpha = 2.0;
};

struct GospaResult {
  double distance = 0.0;
  std::size_t n_missed = 0;
  std::size_t n_false = 0;
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (truth, estimate), d < gate
};

enum class AssignmentMethod { Auto, Exhaustive, Hungarian };

/// Auto searches exhaustively up to 10 points per set and uses the
/// Hungarian algorithm beyond. Throws std::invalid_argument unless gate > 0,
/// order >= 1 and alpha == 2.
GospaResult gospa(std::span<const Point2> truth, std::span<const Point2> estimates,
                  const GospaParams& params = {}, AssignmentMethod method = AssignmentMethod::Auto);

/// Optimal rectangular assignment (rows <= cols), row -> column, minimising
/// the summed cost.
std::vector<std::size_t> hungarian_assignment(const std::vector<std::vector<double>>& cost);

struct DetectionRecord {
  int beam = 0;
  Point2 position;
  double glrt = 0.0;
};

struct TrialResult {
  std::size_t trial_id = 0;
  std::uint64_t trial_seed = 0;
  std::vector<Scatterer> truth;
  std::vector<Point2> estimates;
  std::vector<DetectionRecord> detections;
  Point2 true_centroid;
  std::optional<Point2> est_centroid;  // empty when nothing was detected
  double gospa = 0.0;
  std::size_t n_missed = 0;
  std::size_t n_false = 0;
  std::size_t n_exceed = 0;
  double seconds = 0.0;
};

/// RMS centroid error over trials that produced an estimate.
/// Throws std::domain_error when no such trial exists.
double centroid_rmse(std::span<const TrialResult> trials);

/// sqrt(mean |e|^2). Throws std::domain_error on empty input.
double rms_error(std::span<const Point2> errors);

enum class HeadingMode { Tangential, Normal, Fixed };

struct TargetSpec {
  Point2 centroid{3.5, 0.0};
  double length = 2.0;
  double width = 1.0;
  HeadingMode heading_mode = HeadingMode::Normal;
  double heading = 0.0;  // used for Fixed
  double cell = 0.1;
  double q = 0.1;
  double resolved_heading() const;
};

/// Everything one Monte Carlo arm needs.
struct ExperimentArm {
  std::string label;
  SpacingMode spacing = SpacingMode::Elas;
  int n_tx = 32;
  int n_rx = 32;
  SystemParams system;
  DetectorOptions detector;
  GospaParams gospa;
  double rcs = 0.25;
  TargetSpec target;
  double roi_size = 3.0;
  double roi_spacing = 0.1;
};

/// Resamples until at least one scatterer is active; attempt a uses
/// derive_seed(trial_seed, Stream::Target, a).
std::vector<Scatterer> sample_nonempty(const ExtendedTarget& target, std::uint64_t trial_seed,
                                       double rcs, double carrier_hz);

TrialResult run_trial(const ExperimentArm& arm, std::size_t trial_id, std::uint64_t trial_seed);

struct MonteCarloSummary {
  std::string label;
  double bandwidth_hz = 0.0;
  double rmse = 0.0;  // NaN when every trial failed to detect
  double gospa_mean = 0.0;
  double missed_mean = 0.0;
  double false_mean = 0.0;
  std::size_t n_trials = 0;
  double detect_fail_rate = 0.0;
  double wall_seconds = 0.0;
  double mean_trial_seconds = 0.0;
};

struct MonteCarloResult {
  std::vector<TrialResult> trials;
  MonteCarloSummary summary;
};

/// Trial t uses seed master_seed + t. Trials run on `workers` threads
/// (0 = hardware concurrency); results are stored by trial index.
MonteCarloResult run_monte_carlo(const ExperimentArm& arm, std::size_t n_trials,
                                 std::uint64_t master_seed, unsigned workers = 0);

MonteCarloSummary summarize(const ExperimentArm& arm, std::span<const TrialResult> trials);

/// `config_label,bandwidth_hz,rmse_m,gospa_mean_m,missed_mean,false_mean,n_trials,detect_fail_rate`
void write_summary_header(std::ostream& os);
void write_summary_row(std::ostream& os, const MonteCarloSummary& s);
/// Per-trial rows; header only when requested.
void write_trials_csv(std::ostream& os, std::string_view label,
                      std::span<const TrialResult> trials, bool header = true);
/// `trial,scatterer_id,x_m,y_m,r_m,theta_rad,rcs_m2`
void write_ground_truth_csv(std::ostream& os, std::span<const TrialResult> trials,
                            bool header = true);

}  // namespace nfis
