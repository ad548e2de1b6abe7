// SPDX-License-Identifier: Apache-2.0
#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "nfis/config.hpp"
#include "nfis/constants.hpp"
#include "nfis/detector.hpp"
#include "nfis/errors.hpp"
#include "nfis/geometry.hpp"
#include "nfis/io.hpp"
#include "nfis/metrics.hpp"
#include "nfis/random.hpp"
#include "nfis/scene.hpp"
#include "nfis/special_math.hpp"
#include "nfis/steering.hpp"

namespace nfis::cli {
namespace {

using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  unsigned workers = 0;
  std::vector<std::string> arms;
  std::vector<double> bandwidths;
  std::optional<int> setup;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "scenario file (JSON, dotted keys allowed)");
  sub->add_option("--out", o.out_dir, "run directory (falls back to $NFIS_OUT, then ./nfis-out)");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  sub->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  sub->add_option("--arms", o.arms, "comma-separated arms: ff, elas")->delimiter(',');
  sub->add_option("--bandwidths", o.bandwidths, "comma-separated bandwidths in Hz")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sub->add_option("--setup", o.setup, "reference target placement 1, 2 or 3")
      ->check(CLI::Range(1, 3));
}

ScenarioConfig load_config(const CommonOptions& o) {
  ScenarioConfig cfg = o.config_path.empty() ? ScenarioConfig{} : parse_config(o.config_path);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.trials) cfg.n_trials = *o.trials;
  if (!o.bandwidths.empty()) cfg.bandwidths_hz = o.bandwidths;
  if (!o.arms.empty()) {
    for (const auto& a : o.arms) {
      if (a != "ff" && a != "elas") throw ConfigError("--arms: unknown arm '" + a + "'");
    }
    cfg.arms = o.arms;
  }
  if (o.setup) {
    const auto ref = reference_setup(*o.setup);
    cfg.target.centroid = ref.centroid;
    cfg.target.heading_mode = ref.heading_mode;
  }
  return cfg;
}

std::filesystem::path out_root(const CommonOptions& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv("NFIS_OUT"); env != nullptr && *env != '\0') return env;
  return "nfis-out";
}

std::string mhz_tag(double bandwidth_hz) {
  return "B" + format_number(bandwidth_hz / 1e6, 6) + "MHz";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(RunDirectory& dir, const std::string& command, const ScenarioConfig& cfg,
                    const std::vector<std::string>& args, const json& extra) {
  json files = json::array();
  for (const auto& f : dir.files()) {
    files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  json m;
  m["software"] = {{"name", "nfis"}, {"version", NFIS_VERSION}};
  m["command"] = command;
  m["arguments"] = args;
  m["config"] = to_json(cfg);
  m["seeds"] = {{"master_seed", cfg.master_seed},
                {"trial_seed", "master_seed + trial"},
                {"streams", {{"target", 1}, {"symbols", 2}, {"noise", 3}}}};
  m["created_utc"] = utc_timestamp();
  m["files"] = files;
  if (!extra.is_null()) m["results"] = extra;
  // The manifest is not listed in itself.
  std::ofstream(dir.root() / "manifest.json", std::ios::binary) << m.dump(2) << '\n';
}

// ---------------------------------------------------------------- commands

json cmd_resolution_map(const ScenarioConfig& cfg, RunDirectory& dir, const Region& region,
                        double step, bool broadside, std::ostream& out) {
  const auto geom = make_geometry(cfg);
  const auto mode = broadside ? FocusAngleMode::Broadside : FocusAngleMode::PerCell;
  const auto scales = near_field_scales(geom);
  std::ostringstream summary;
  summary << "bandwidth_hz,c_over_2b_m,super_res_radius_m,bandwidth_limited_fraction\n";
  json res = json::array();
  for (double bw : cfg.bandwidths_hz) {
    const auto map = range_resolution_map(geom, bw, region, step, mode);
    std::ostringstream csv;
    write_resolution_map_csv(csv, map);
    dir.write("resolution_map_" + mhz_tag(bw) + ".csv", csv.str());
    const double limit = bandwidth_resolution(bw);
    const auto n_limited = std::count_if(map.delta_r.begin(), map.delta_r.end(), [&](double v) {
      return std::abs(v - limit) <= 1e-12 * limit;
    });
    const double frac = static_cast<double>(n_limited) / static_cast<double>(map.delta_r.size());
    const double rsr = scales.super_res_radius(bw);
    summary << format_number(bw, 9) << ',' << format_number(limit) << ','
            << format_number(rsr) << ',' << format_number(frac) << '\n';
    res.push_back({{"bandwidth_hz", bw}, {"super_res_radius_m", rsr}, {"bandwidth_limited_fraction", frac}});
    out << mhz_tag(bw) << ": c/2B = " << format_number(limit) << " m, r_sr = "
        << format_number(rsr) << " m, bandwidth-limited cells " << format_number(100 * frac, 4)
        << "%\n";
  }
  dir.write("resolution_summary.csv", summary.str());
  return res;
}

json cmd_range_profile(const ScenarioConfig& cfg, RunDirectory& dir,
                       const std::vector<double>& focus, double half_span, double step,
                       std::ostream& out) {
  const auto geom = make_geometry(cfg);
  const auto scales = near_field_scales(geom);
  std::ostringstream summary;
  summary << "focus_m,bandwidth_hz,depth_of_focus_m,c_over_2b_m,hp_width_rx_m,hp_width_overall_m\n";
  json res = json::array();
  for (double f : focus) {
    if (!(f > 0.0)) throw ConfigError("--focus values must be positive");
    std::vector<double> axis;
    const double r0 = std::max(0.5, f - half_span);
    const auto n_pts = static_cast<std::size_t>(std::floor((f + half_span - r0) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n_pts; ++i) axis.push_back(r0 + static_cast<double>(i) * step);
    std::vector<cdouble> direct, approx;
    for (double r : axis) {
      direct.push_back(rx_af_range(r, f, 0.0, geom, RangeMethod::DirectSum));
      approx.push_back(rx_af_range(r, f, 0.0, geom, RangeMethod::FresnelApprox));
    }
    const std::string ftag = "f" + format_number(f, 6) + "m";
    std::ostringstream a, b;
    write_profile_csv(a, axis, direct);
    write_profile_csv(b, axis, approx);
    dir.write("rx_range_direct_" + ftag + ".csv", a.str());
    dir.write("rx_range_fresnel_" + ftag + ".csv", b.str());

    const auto rx_power = [&](double r) { return std::norm(rx_af_range(r, f, 0.0, geom)); };
    const double w_rx = half_power_width(rx_power, f, step / 10.0, half_span);
    const double dof = depth_of_focus(f, scales.max_focus);
    for (double bw : cfg.bandwidths_hz) {
      const double df = bw / cfg.n_subcarriers;
      std::vector<cdouble> overall;
      for (double r : axis) {
        overall.push_back(overall_range_profile(r, f, 0.0, geom, cfg.n_subcarriers, df));
      }
      std::ostringstream c;
      write_profile_csv(c, axis, overall);
      dir.write("range_profile_" + ftag + "_" + mhz_tag(bw) + ".csv", c.str());
      const auto power = [&](double r) {
        return std::norm(overall_range_profile(r, f, 0.0, geom, cfg.n_subcarriers, df));
      };
      const double w = half_power_width(power, f, step / 10.0, half_span);
      summary << format_number(f) << ',' << format_number(bw, 9) << ',' << format_number(dof)
              << ',' << format_number(bandwidth_resolution(bw)) << ',' << format_number(w_rx)
              << ',' << format_number(w) << '\n';
      res.push_back({{"focus_m", f}, {"bandwidth_hz", bw}, {"hp_width_overall_m", w}});
      out << ftag << ' ' << mhz_tag(bw) << ": DF = " << format_number(dof)
          << " m, half-power width = " << format_number(w) << " m\n";
    }
  }
  dir.write("range_profile_summary.csv", summary.str());
  return res;
}

json cmd_beampattern(const ScenarioConfig& cfg, RunDirectory& dir, double steer, int samples,
                     std::ostream& out) {
  const auto geom = make_geometry(cfg, SpacingMode::Elas);
  std::vector<double> axis;
  const double half_pi = kPi / 2.0;
  for (int i = 0; i < samples; ++i) axis.push_back(-half_pi + kPi * i / (samples - 1));
  const auto lobes = rx_grating_lobe_angles(geom, steer);
  axis.insert(axis.end(), lobes.begin(), lobes.end());
  std::sort(axis.begin(), axis.end());

  std::vector<cdouble> tx, rx, comp;
  double worst = 0.0;
  for (double a : axis) {
    tx.push_back(tx_array_factor(a, steer, cfg.n_tx));
    rx.push_back(rx_af_angular(a, steer, cfg.n_tx, cfg.n_rx));
    comp.push_back(composite_af_angular(a, steer, cfg.n_tx, cfg.n_rx));
  }
  for (double a : lobes) {
    worst = std::max(worst, std::abs(composite_af_angular(a, steer, cfg.n_tx, cfg.n_rx)));
  }
  const std::pair<const char*, const std::vector<cdouble>*> outputs[] = {
      {"beampattern_tx.csv", &tx}, {"beampattern_rx_angular.csv", &rx},
      {"beampattern_composite.csv", &comp}};
  for (const auto& [name, values] : outputs) {
    std::ostringstream csv;
    write_profile_csv(csv, axis, *values);
    dir.write(name, csv.str());
  }
  std::ostringstream gl;
  gl << "angle_rad,composite_abs\n";
  for (double a : lobes) {
    gl << format_number(a, 12) << ','
       << format_number(std::abs(composite_af_angular(a, steer, cfg.n_tx, cfg.n_rx)), 6) << '\n';
  }
  dir.write("grating_lobes.csv", gl.str());
  out << lobes.size() << " Rx grating lobes, max |composite| there = " << format_number(worst)
      << '\n';
  return {{"grating_lobes", lobes.size()}, {"max_composite_at_grating_lobes", worst}};
}

json cmd_radar_map(const ScenarioConfig& cfg, RunDirectory& dir, std::size_t trial,
                   std::ostream& out) {
  const std::uint64_t trial_seed = cfg.master_seed + trial;
  json res = json::array();
  std::string truth_csv;
  for (double bw : cfg.bandwidths_hz) {
    for (const auto& arm_name : cfg.arms) {
      const auto arm = make_arm(cfg, arm_name, bw);
      const auto geom = build_array(arm.spacing, arm.n_tx, arm.n_rx, arm.system.carrier_hz);
      const auto target = build_target(arm.target.centroid, arm.target.length, arm.target.width,
                                       arm.target.resolved_heading(), arm.target.cell,
                                       arm.target.q);
      const auto scatterers = sample_nonempty(target, trial_seed, arm.rcs, arm.system.carrier_hz);
      const auto frame = generate_symbols(arm.system.n_subcarriers, arm.system.n_symbols,
                                          derive_seed(trial_seed, Stream::Symbols));
      const auto grid = build_search_grid(arm.target.centroid, arm.roi_size, arm.roi_size,
                                          arm.roi_spacing);
      const auto map = build_radar_map(scatterers, geom, arm.system, frame, grid, arm.detector,
                                       derive_seed(trial_seed, Stream::Noise));
      const std::string tag = arm_name + "_" + mhz_tag(bw);
      std::ostringstream m, d;
      write_radar_map_csv(m, map);
      write_detections_csv(d, map, trial);
      dir.write("radar_map_" + tag + ".csv", m.str());
      dir.write("detections_" + tag + ".csv", d.str());
      if (truth_csv.empty()) {
        TrialResult t;
        t.trial_id = trial;
        t.truth = scatterers;
        std::ostringstream g;
        write_ground_truth_csv(g, std::span<const TrialResult>(&t, 1));
        truth_csv = g.str();
      }
      out << tag << ": " << map.beams.size() << " beams, " << map.n_exceed
          << " threshold crossings, " << map.detections.size() << " peaks, "
          << scatterers.size() << " scatterers\n";
      res.push_back({{"arm", arm_name},
                     {"bandwidth_hz", bw},
                     {"beams", map.beams.size()},
                     {"detections", map.detections.size()},
                     {"scatterers", scatterers.size()}});
    }
  }
  dir.write("ground_truth.csv", truth_csv);
  return res;
}

json cmd_sweep(const ScenarioConfig& cfg, RunDirectory& dir, unsigned workers,
               bool write_detections, std::ostream& out) {
  std::ostringstream summary, trials, truth, detections;
  write_summary_header(summary);
  bool first_arm = true;
  json res = json::array();
  for (double bw : cfg.bandwidths_hz) {
    for (const auto& arm_name : cfg.arms) {
      const auto arm = make_arm(cfg, arm_name, bw);
      auto mc = run_monte_carlo(arm, cfg.n_trials, cfg.master_seed, workers);
      mc.summary.label = arm_name;
      write_summary_row(summary, mc.summary);
      write_trials_csv(trials, arm_name + "_" + mhz_tag(bw), mc.trials, first_arm);
      if (first_arm) write_ground_truth_csv(truth, mc.trials);  // shared by every arm
      if (write_detections) {
        if (first_arm) detections << "config_label,trial,beam_idx,x_m,y_m,glrt\n";
        for (const auto& t : mc.trials) {
          for (const auto& det : t.detections) {
            detections << arm_name << '_' << mhz_tag(bw) << ',' << t.trial_id << ',' << det.beam
                       << ',' << format_number(det.position.x) << ','
                       << format_number(det.position.y) << ',' << format_number(det.glrt, 9)
                       << '\n';
          }
        }
      }
      first_arm = false;
      const auto& s = mc.summary;
      out << arm_name << ' ' << mhz_tag(bw) << ": rmse " << format_number(s.rmse, 4)
          << " m, gospa " << format_number(s.gospa_mean, 4) << " m, missed "
          << format_number(s.missed_mean, 4) << ", false " << format_number(s.false_mean, 4)
          << " (" << format_number(s.wall_seconds, 3) << " s)\n";
      res.push_back({{"arm", arm_name},
                     {"bandwidth_hz", bw},
                     {"wall_seconds", s.wall_seconds},
                     {"mean_trial_seconds", s.mean_trial_seconds}});
    }
  }
  dir.write("summary.csv", summary.str());
  dir.write("trials.csv", trials.str());
  dir.write("ground_truth.csv", truth.str());
  if (write_detections) dir.write("detections.csv", detections.str());
  return res;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Near-field ELAS MIMO-OFDM sensing simulator", "nfis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NFIS_VERSION);

  CommonOptions common;

  auto* res_cmd = app.add_subcommand("resolution-map", "range-resolution maps per bandwidth");
  add_common(res_cmd, common);
  std::vector<double> region_v{0.0, 20.0, -10.0, 10.0};
  double res_step = 0.1;
  bool broadside = false;
  res_cmd->add_option("--region", region_v, "x_min,x_max,y_min,y_max")->delimiter(',')->expected(4);
  res_cmd->add_option("--step", res_step, "cell size in metres")->check(CLI::PositiveNumber);
  res_cmd->add_flag("--broadside", broadside, "use the broadside focusing limit for every cell");

  auto* prof_cmd = app.add_subcommand("range-profile", "range-domain array factors and profiles");
  add_common(prof_cmd, common);
  std::vector<double> focus{1.0, 7.0, 15.0};
  double half_span = 5.0;
  double prof_step = 0.002;
  prof_cmd->add_option("--focus", focus, "focal ranges in metres")->delimiter(',');
  prof_cmd->add_option("--span", half_span, "half window around each focus")->check(CLI::PositiveNumber);
  prof_cmd->add_option("--step", prof_step, "range step")->check(CLI::PositiveNumber);

  auto* beam_cmd = app.add_subcommand("beampattern", "Tx, Rx and composite angular patterns");
  add_common(beam_cmd, common);
  double steer = 0.0;
  int samples = 20001;
  beam_cmd->add_option("--steer", steer, "steering angle in radians");
  beam_cmd->add_option("--samples", samples, "uniform angle samples")->check(CLI::Range(2, 10000000));

  auto* map_cmd = app.add_subcommand("radar-map", "single-trial GLRT radar maps");
  add_common(map_cmd, common);
  std::size_t map_trial = 0;
  map_cmd->add_option("--trial", map_trial, "trial index (seed = master + trial)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo bandwidth sweep over arms");
  add_common(sweep_cmd, common);
  bool sweep_detections = false;
  sweep_cmd->add_flag("--detections", sweep_detections, "also write every detection");

  std::vector<std::string> argv_store{"nfis"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const ScenarioConfig cfg = load_config(common);
    RunDirectory dir(out_root(common));
    json extra;
    std::string command;
    if (res_cmd->parsed()) {
      command = "resolution-map";
      if (region_v.size() != 4) throw ConfigError("--region needs four values");
      const Region region{region_v[0], region_v[1], region_v[2], region_v[3]};
      extra = cmd_resolution_map(cfg, dir, region, res_step, broadside, out);
    } else if (prof_cmd->parsed()) {
      command = "range-profile";
      extra = cmd_range_profile(cfg, dir, focus, half_span, prof_step, out);
    } else if (beam_cmd->parsed()) {
      command = "beampattern";
      extra = cmd_beampattern(cfg, dir, steer, samples, out);
    } else if (map_cmd->parsed()) {
      command = "radar-map";
      extra = cmd_radar_map(cfg, dir, map_trial, out);
    } else {
      command = "sweep";
      const unsigned workers =
          common.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : common.workers;
      extra = cmd_sweep(cfg, dir, workers, sweep_detections, out);
    }
    write_manifest(dir, command, cfg, args, extra);
    out << "wrote " << dir.files().size() << " files + manifest.json to " << dir.root().string()
        << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace nfis::cli
