// SPDX-License-Identifier: Apache-2.0
#include "nfis/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "nfis/io.hpp"
#include "nfis/random.hpp"

namespace nfis {
namespace {

constexpr std::size_t kExhaustiveLimit = 10;

struct BranchAndBound {
  const std::vector<std::vector<double>>& cost;
  std::size_t rows;
  std::size_t cols;
  std::vector<double> row_min_suffix;  // lower bound for rows i..end
  std::vector<char> used;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();

  explicit BranchAndBound(const std::vector<std::vector<double>>& c)
      : cost(c), rows(c.size()), cols(c.empty() ? 0 : c.front().size()) {
    row_min_suffix.assign(rows + 1, 0.0);
    for (std::size_t i = rows; i-- > 0;) {
      row_min_suffix[i] = row_min_suffix[i + 1] + *std::min_element(cost[i].begin(), cost[i].end());
    }
    used.assign(cols, 0);
    current.assign(rows, 0);
  }

  void search(std::size_t i, double partial) {
    if (partial + row_min_suffix[i] >= best_cost) return;
    if (i == rows) {
      best_cost = partial;
      best = current;
      return;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      current[i] = j;
      search(i + 1, partial + cost[i][j]);
      used[j] = 0;
    }
  }
};

std::vector<std::size_t> exhaustive_assignment(const std::vector<std::vector<double>>& cost) {
  if (cost.empty()) return {};
  BranchAndBound bb(cost);
  bb.search(0, 0.0);
  return bb.best;
}

}  // namespace

std::vector<std::size_t> hungarian_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost.front().size();
  if (m < n) throw std::invalid_argument("hungarian_assignment: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> out(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) out[p[j] - 1] = j - 1;
  }
  return out;
}

GospaResult gospa(std::span<const Point2> truth, std::span<const Point2> estimates,
                  const GospaParams& params, AssignmentMethod method) {
  if (!(params.gate > 0.0)) throw std::invalid_argument("gospa: gate must be positive");
  if (!(params.order >= 1.0)) throw std::invalid_argument("gospa: order must be >= 1");
  if (params.alpha != 2.0) throw std::invalid_argument("gospa: only alpha = 2 is supported");

  const double cp = std::pow(params.gate, params.order);
  // Rows are the smaller set.
  const bool truth_rows = truth.size() <= estimates.size();
  const auto rows = truth_rows ? truth : estimates;
  const auto cols = truth_rows ? estimates : truth;

  std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cost[i][j] = std::min(std::pow(distance(rows[i], cols[j]), params.order), cp);
    }
  }
  std::vector<std::size_t> assign;
  const bool small = std::max(rows.size(), cols.size()) <= kExhaustiveLimit;
  if (method == AssignmentMethod::Exhaustive ||
      (method == AssignmentMethod::Auto && small)) {
    assign = exhaustive_assignment(cost);
  } else {
    assign = hungarian_assignment(cost);
  }

  GospaResult res;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t j = assign[i];
    if (distance(rows[i], cols[j]) < params.gate) {
      res.matches.emplace_back(truth_rows ? i : j, truth_rows ? j : i);
    }
  }
  // Re-sum in truth order so equal matchings give bit-identical values
  // whichever search produced them.
  std::sort(res.matches.begin(), res.matches.end());
  double total = 0.0;
  for (const auto& [t, e] : res.matches) {
    total += std::pow(distance(truth[t], estimates[e]), params.order);
  }
  res.n_missed = truth.size() - res.matches.size();
  res.n_false = estimates.size() - res.matches.size();
  total += cp / params.alpha * static_cast<double>(res.n_missed + res.n_false);
  res.distance = std::pow(total, 1.0 / params.order);
  return res;
}

double rms_error(std::span<const Point2> errors) {
  if (errors.empty()) throw std::domain_error("rms_error: no samples");
  double acc = 0.0;
  for (const auto& e : errors) acc += e.x * e.x + e.y * e.y;
  return std::sqrt(acc / static_cast<double>(errors.size()));
}

double centroid_rmse(std::span<const TrialResult> trials) {
  if (trials.empty()) throw std::domain_error("centroid_rmse: no trials");
  std::vector<Point2> errors;
  for (const auto& t : trials) {
    if (!t.est_centroid) continue;
    errors.push_back({t.est_centroid->x - t.true_centroid.x, t.est_centroid->y - t.true_centroid.y});
  }
  if (errors.empty()) throw std::domain_error("centroid_rmse: no trial produced a detection");
  return rms_error(errors);
}

double TargetSpec::resolved_heading() const {
  const double theta = std::atan2(centroid.y, centroid.x);
  switch (heading_mode) {
    case HeadingMode::Tangential:
      return theta + std::acos(-1.0) / 2.0;
    case HeadingMode::Normal:
      return theta;
    case HeadingMode::Fixed:
      break;
  }
  return heading;
}

std::vector<Scatterer> sample_nonempty(const ExtendedTarget& target, std::uint64_t trial_seed,
                                       double rcs, double carrier_hz) {
  if (target.activation_prob <= 0.0 || target.cells.empty()) {
    throw std::invalid_argument("sample_nonempty: target can never produce a scatterer");
  }
  for (std::uint64_t attempt = 0;; ++attempt) {
    auto s = sample_scatterers(target, derive_seed(trial_seed, Stream::Target, attempt), rcs,
                               carrier_hz);
    if (!s.empty()) return s;
  }
}

TrialResult run_trial(const ExperimentArm& arm, std::size_t trial_id, std::uint64_t trial_seed) {
  const auto start = std::chrono::steady_clock::now();
  const ArrayGeometry geom = build_array(arm.spacing, arm.n_tx, arm.n_rx, arm.system.carrier_hz);
  const auto target = build_target(arm.target.centroid, arm.target.length, arm.target.width,
                                   arm.target.resolved_heading(), arm.target.cell, arm.target.q);

  TrialResult res;
  res.trial_id = trial_id;
  res.trial_seed = trial_seed;
  res.truth = sample_nonempty(target, trial_seed, arm.rcs, arm.system.carrier_hz);
  const auto frame = generate_symbols(arm.system.n_subcarriers, arm.system.n_symbols,
                                      derive_seed(trial_seed, Stream::Symbols));
  const auto grid =
      build_search_grid(arm.target.centroid, arm.roi_size, arm.roi_size, arm.roi_spacing);
  const auto map = build_radar_map(res.truth, geom, arm.system, frame, grid, arm.detector,
                                   derive_seed(trial_seed, Stream::Noise));

  const auto truth_pos = positions_of(res.truth);
  res.true_centroid = barycenter(truth_pos);
  res.estimates = map.estimates;
  for (auto i : map.detections) {
    res.detections.push_back({map.point_beam[i], {grid.points[i].x, grid.points[i].y},
                              map.glrt_values[i]});
  }
  if (!res.estimates.empty()) res.est_centroid = barycenter(res.estimates);
  const auto g = gospa(truth_pos, res.estimates, arm.gospa);
  res.gospa = g.distance;
  res.n_missed = g.n_missed;
  res.n_false = g.n_false;
  res.n_exceed = map.n_exceed;
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

MonteCarloSummary summarize(const ExperimentArm& arm, std::span<const TrialResult> trials) {
  MonteCarloSummary s;
  s.label = arm.label;
  s.bandwidth_hz = arm.system.bandwidth_hz;
  s.n_trials = trials.size();
  if (trials.empty()) return s;
  std::size_t fails = 0;
  double secs = 0.0;
  for (const auto& t : trials) {
    s.gospa_mean += t.gospa;
    s.missed_mean += static_cast<double>(t.n_missed);
    s.false_mean += static_cast<double>(t.n_false);
    if (!t.est_centroid) ++fails;
    secs += t.seconds;
  }
  const double n = static_cast<double>(trials.size());
  s.gospa_mean /= n;
  s.missed_mean /= n;
  s.false_mean /= n;
  s.detect_fail_rate = static_cast<double>(fails) / n;
  s.mean_trial_seconds = secs / n;
  s.rmse = fails == trials.size() ? std::numeric_limits<double>::quiet_NaN()
                                  : centroid_rmse(trials);
  return s;
}

MonteCarloResult run_monte_carlo(const ExperimentArm& arm, std::size_t n_trials,
                                 std::uint64_t master_seed, unsigned workers) {
  const auto start = std::chrono::steady_clock::now();
  MonteCarloResult out;
  out.trials.resize(n_trials);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_trials, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= n_trials) return;
      try {
        out.trials[t] = run_trial(arm, t, master_seed + t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_trials;
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  out.summary = summarize(arm, out.trials);
  out.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_summary_header(std::ostream& os) {
  os << "config_label,bandwidth_hz,rmse_m,gospa_mean_m,missed_mean,false_mean,n_trials,"
        "detect_fail_rate\n";
}

void write_summary_row(std::ostream& os, const MonteCarloSummary& s) {
  os << s.label << ',' << format_number(s.bandwidth_hz, 9) << ',' << format_number(s.rmse) << ','
     << format_number(s.gospa_mean) << ',' << format_number(s.missed_mean) << ','
     << format_number(s.false_mean) << ',' << s.n_trials << ','
     << format_number(s.detect_fail_rate) << '\n';
}

void write_trials_csv(std::ostream& os, std::string_view label,
                      std::span<const TrialResult> trials, bool header) {
  if (header) {
    os << "config_label,trial,n_true,n_est,true_cx_m,true_cy_m,est_cx_m,est_cy_m,gospa_m,"
          "n_missed,n_false,n_exceed\n";
  }
  for (const auto& t : trials) {
    os << label << ',' << t.trial_id << ',' << t.truth.size() << ',' << t.estimates.size() << ','
       << format_number(t.true_centroid.x) << ',' << format_number(t.true_centroid.y) << ',';
    if (t.est_centroid) {
      os << format_number(t.est_centroid->x) << ',' << format_number(t.est_centroid->y);
    } else {
      os << ',';
    }
    os << ',' << format_number(t.gospa) << ',' << t.n_missed << ',' << t.n_false << ','
       << t.n_exceed << '\n';
  }
}

void write_ground_truth_csv(std::ostream& os, std::span<const TrialResult> trials, bool header) {
  if (header) os << "trial,scatterer_id,x_m,y_m,r_m,theta_rad,rcs_m2\n";
  for (const auto& t : trials) {
    for (std::size_t i = 0; i < t.truth.size(); ++i) {
      const auto& s = t.truth[i];
      os << t.trial_id << ',' << i << ',' << format_number(s.position.x) << ','
         << format_number(s.position.y) << ',' << format_number(s.range_ref, 9) << ','
         << format_number(s.angle_ref, 9) << ',' << format_number(s.rcs) << '\n';
    }
  }
}

}  // namespace nfis
