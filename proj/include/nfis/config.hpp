// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nfis/geometry.hpp"
#include "nfis/metrics.hpp"
#include "nfis/steering.hpp"

namespace nfis {

/// Scenario description. Defaults are the reference simulation parameters.
struct ScenarioConfig {
  double carrier_hz = 60e9;
  std::vector<double> bandwidths_hz{50e6, 200e6, 400e6, 750e6};
  int n_subcarriers = 1024;
  int n_symbols = 10;
  int n_tx = 32;
  int n_rx = 32;
  SpacingMode spacing_mode = SpacingMode::Elas;
  double eirp_w = 0.1;
  double gain_tx = 1.0;
  double gain_rx = 1.0;
  double noise_figure_db = 10.0;
  double rcs_m2 = 0.25;
  double cp_fraction = 0.125;
  TargetSpec target;
  double roi_size_m = 3.0;
  double roi_spacing_m = 0.1;
  DetectorOptions detector;
  GospaParams gospa;
  std::size_t n_trials = 1000;
  std::uint64_t master_seed = 1;
  std::vector<std::string> arms{"ff", "elas"};
};

/// Reads a JSON object; nested objects are flattened to dotted keys, so
/// {"target": {"q": 0.2}} and {"target.q": 0.2} are equivalent. Unknown
/// keys, type errors and out-of-range values raise ConfigError naming the
/// key. Blank input yields the defaults.
ScenarioConfig parse_config_text(std::string_view text);
/// Throws ConfigError when the file cannot be read.
ScenarioConfig parse_config(const std::filesystem::path& path);

/// Reference placements: 1 = (5, 3) tangential, 2 = (3.5, 0) normal,
/// 3 = (17, -8) normal. Throws ConfigError otherwise.
TargetSpec reference_setup(int setup);

SpacingMode parse_spacing_mode(std::string_view name);
std::string spacing_mode_name(SpacingMode mode);

nlohmann::json to_json(const ScenarioConfig& cfg);

SystemParams system_params(const ScenarioConfig& cfg, double bandwidth_hz);
ArrayGeometry make_geometry(const ScenarioConfig& cfg, SpacingMode mode);
ArrayGeometry make_geometry(const ScenarioConfig& cfg);

/// "ff" uses half-wavelength arrays, "elas" the sparse Rx design; any other
/// name raises ConfigError.
ExperimentArm make_arm(const ScenarioConfig& cfg, std::string_view arm, double bandwidth_hz);

}  // namespace nfis
