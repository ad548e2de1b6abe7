// SPDX-License-Identifier: Apache-2.0
#include "nfis/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "nfis/errors.hpp"
#include "nfis/scene.hpp"

namespace nfis {
namespace {

using nlohmann::json;

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      out[key] = *it;
    }
  }
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(key, "must be finite");
  return d;
}

double positive(const json& v, const std::string& key) {
  const double d = as_number(v, key);
  if (!(d > 0.0)) fail(key, "must be positive");
  return d;
}

int positive_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  const auto i = v.get<long long>();
  if (i < 1 || i > std::numeric_limits<int>::max()) fail(key, "must be a positive integer");
  return static_cast<int>(i);
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

using Setter = std::function<void(ScenarioConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"carrier_hz", [](auto& c, const json& v, const auto& k) { c.carrier_hz = positive(v, k); }},
      {"bandwidth_hz",
       [](auto& c, const json& v, const auto& k) {
         c.bandwidths_hz.clear();
         if (v.is_array()) {
           if (v.empty()) fail(k, "bandwidth list is empty");
           for (std::size_t i = 0; i < v.size(); ++i) {
             c.bandwidths_hz.push_back(positive(v[i], k + "[" + std::to_string(i) + "]"));
           }
         } else {
           c.bandwidths_hz.push_back(positive(v, k));
         }
       }},
      {"n_subcarriers", [](auto& c, const json& v, const auto& k) { c.n_subcarriers = positive_int(v, k); }},
      {"n_symbols", [](auto& c, const json& v, const auto& k) { c.n_symbols = positive_int(v, k); }},
      {"n_tx", [](auto& c, const json& v, const auto& k) { c.n_tx = positive_int(v, k); }},
      {"n_rx", [](auto& c, const json& v, const auto& k) { c.n_rx = positive_int(v, k); }},
      {"spacing_mode",
       [](auto& c, const json& v, const auto& k) {
         try {
           c.spacing_mode = parse_spacing_mode(as_string(v, k));
         } catch (const ConfigError&) {
           fail(k, "expected 'elas' or 'half_wavelength'");
         }
       }},
      {"eirp_w", [](auto& c, const json& v, const auto& k) { c.eirp_w = positive(v, k); }},
      {"gain_tx", [](auto& c, const json& v, const auto& k) { c.gain_tx = positive(v, k); }},
      {"gain_rx", [](auto& c, const json& v, const auto& k) { c.gain_rx = positive(v, k); }},
      {"noise_figure_db", [](auto& c, const json& v, const auto& k) { c.noise_figure_db = as_number(v, k); }},
      {"rcs_m2", [](auto& c, const json& v, const auto& k) { c.rcs_m2 = positive(v, k); }},
      {"cp_fraction",
       [](auto& c, const json& v, const auto& k) {
         c.cp_fraction = as_number(v, k);
         if (c.cp_fraction < 0.0) fail(k, "must be non-negative");
       }},
      {"target.setup", [](auto&, const json&, const auto&) {}},  // applied first
      {"target.centroid_m",
       [](auto& c, const json& v, const auto& k) {
         if (!v.is_array() || v.size() != 2) fail(k, "expected [x, y]");
         c.target.centroid = {as_number(v[0], k + "[0]"), as_number(v[1], k + "[1]")};
       }},
      {"target.length_m", [](auto& c, const json& v, const auto& k) { c.target.length = positive(v, k); }},
      {"target.width_m", [](auto& c, const json& v, const auto& k) { c.target.width = positive(v, k); }},
      {"target.heading_mode",
       [](auto& c, const json& v, const auto& k) {
         const auto s = as_string(v, k);
         if (s == "tangential") c.target.heading_mode = HeadingMode::Tangential;
         else if (s == "normal") c.target.heading_mode = HeadingMode::Normal;
         else if (s == "fixed") c.target.heading_mode = HeadingMode::Fixed;
         else fail(k, "expected 'tangential', 'normal' or 'fixed'");
       }},
      {"target.heading_rad", [](auto& c, const json& v, const auto& k) { c.target.heading = as_number(v, k); }},
      {"target.cell_m", [](auto& c, const json& v, const auto& k) { c.target.cell = positive(v, k); }},
      {"target.q",
       [](auto& c, const json& v, const auto& k) {
         c.target.q = as_number(v, k);
         if (!(c.target.q > 0.0 && c.target.q <= 1.0)) fail(k, "activation probability must lie in (0, 1]");
       }},
      {"roi.size_m", [](auto& c, const json& v, const auto& k) { c.roi_size_m = positive(v, k); }},
      {"roi.spacing_m", [](auto& c, const json& v, const auto& k) { c.roi_spacing_m = positive(v, k); }},
      {"detector.far", [](auto& c, const json& v, const auto& k) { c.detector.far = positive(v, k); }},
      {"detector.distance_mode",
       [](auto& c, const json& v, const auto& k) {
         const auto s = as_string(v, k);
         if (s == "exact") c.detector.distance_mode = DistanceMode::Exact;
         else if (s == "fresnel") c.detector.distance_mode = DistanceMode::Fresnel;
         else fail(k, "expected 'exact' or 'fresnel'");
       }},
      {"detector.beam_assignment",
       [](auto& c, const json& v, const auto& k) {
         const auto s = as_string(v, k);
         if (s == "nearest") c.detector.assignment = BeamAssignment::Nearest;
         else if (s == "max") c.detector.assignment = BeamAssignment::MaxOverBeams;
         else fail(k, "expected 'nearest' or 'max'");
       }},
      {"gospa.gate_m", [](auto& c, const json& v, const auto& k) { c.gospa.gate = positive(v, k); }},
      {"gospa.order",
       [](auto& c, const json& v, const auto& k) {
         c.gospa.order = as_number(v, k);
         if (c.gospa.order < 1.0) fail(k, "must be >= 1");
       }},
      {"n_trials",
       [](auto& c, const json& v, const auto& k) { c.n_trials = static_cast<std::size_t>(positive_int(v, k)); }},
      {"master_seed",
       [](auto& c, const json& v, const auto& k) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
           fail(k, "expected a non-negative integer");
         }
         c.master_seed = v.get<std::uint64_t>();
       }},
      {"arms",
       [](auto& c, const json& v, const auto& k) {
         if (!v.is_array() || v.empty()) fail(k, "expected a non-empty list of arm names");
         c.arms.clear();
         for (std::size_t i = 0; i < v.size(); ++i) {
           const auto key = k + "[" + std::to_string(i) + "]";
           const auto s = as_string(v[i], key);
           if (s != "ff" && s != "elas") fail(key, "expected 'ff' or 'elas'");
           c.arms.push_back(s);
         }
       }},
  };
  return table;
}

void validate(const ScenarioConfig& c) {
  try {
    (void)build_target(c.target.centroid, c.target.length, c.target.width,
                       c.target.resolved_heading(), c.target.cell, c.target.q);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config key 'target': ") + e.what());
  }
  const double pts = std::floor(c.roi_size_m / c.roi_spacing_m + 1e-9) + 1.0;
  if (!(c.detector.far < pts * pts)) fail("detector.far", "must be below the search-grid size");
  if (c.n_tx < 2) fail("n_tx", "need at least 2 elements");
  if (c.n_rx < 2) fail("n_rx", "need at least 2 elements");
}

}  // namespace

SpacingMode parse_spacing_mode(std::string_view name) {
  if (name == "elas") return SpacingMode::Elas;
  if (name == "half_wavelength") return SpacingMode::HalfWavelength;
  throw ConfigError("unknown spacing mode '" + std::string(name) + "'");
}

std::string spacing_mode_name(SpacingMode mode) {
  return mode == SpacingMode::Elas ? "elas" : "half_wavelength";
}

TargetSpec reference_setup(int setup) {
  TargetSpec t;
  switch (setup) {
    case 1:
      t.centroid = {5.0, 3.0};
      t.heading_mode = HeadingMode::Tangential;
      break;
    case 2:
      t.centroid = {3.5, 0.0};
      t.heading_mode = HeadingMode::Normal;
      break;
    case 3:
      t.centroid = {17.0, -8.0};
      t.heading_mode = HeadingMode::Normal;
      break;
    default:
      throw ConfigError("setup must be 1, 2 or 3");
  }
  return t;
}

ScenarioConfig parse_config_text(std::string_view text) {
  ScenarioConfig cfg;
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return cfg;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  std::map<std::string, json> flat;
  flatten(root, "", flat);

  if (auto it = flat.find("target.setup"); it != flat.end()) {
    const int s = positive_int(it->second, it->first);
    try {
      const auto ref = reference_setup(s);
      cfg.target.centroid = ref.centroid;
      cfg.target.heading_mode = ref.heading_mode;
    } catch (const ConfigError&) {
      fail(it->first, "setup must be 1, 2 or 3");
    }
  }
  const auto& table = setters();
  for (const auto& [key, value] : flat) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, value, key);
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::json to_json(const ScenarioConfig& c) {
  json j;
  j["carrier_hz"] = c.carrier_hz;
  j["bandwidth_hz"] = c.bandwidths_hz;
  j["n_subcarriers"] = c.n_subcarriers;
  j["n_symbols"] = c.n_symbols;
  j["n_tx"] = c.n_tx;
  j["n_rx"] = c.n_rx;
  j["spacing_mode"] = spacing_mode_name(c.spacing_mode);
  j["eirp_w"] = c.eirp_w;
  j["gain_tx"] = c.gain_tx;
  j["gain_rx"] = c.gain_rx;
  j["noise_figure_db"] = c.noise_figure_db;
  j["rcs_m2"] = c.rcs_m2;
  j["cp_fraction"] = c.cp_fraction;
  const char* hm = c.target.heading_mode == HeadingMode::Tangential ? "tangential"
                   : c.target.heading_mode == HeadingMode::Normal   ? "normal"
                                                                    : "fixed";
  j["target"] = {{"centroid_m", {c.target.centroid.x, c.target.centroid.y}},
                 {"length_m", c.target.length},
                 {"width_m", c.target.width},
                 {"heading_mode", hm},
                 {"heading_rad", c.target.heading},
                 {"cell_m", c.target.cell},
                 {"q", c.target.q}};
  j["roi"] = {{"size_m", c.roi_size_m}, {"spacing_m", c.roi_spacing_m}};
  j["detector"] = {
      {"far", c.detector.far},
      {"distance_mode", c.detector.distance_mode == DistanceMode::Exact ? "exact" : "fresnel"},
      {"beam_assignment",
       c.detector.assignment == BeamAssignment::Nearest ? "nearest" : "max"}};
  j["gospa"] = {{"gate_m", c.gospa.gate}, {"order", c.gospa.order}};
  j["n_trials"] = c.n_trials;
  j["master_seed"] = c.master_seed;
  j["arms"] = c.arms;
  return j;
}

SystemParams system_params(const ScenarioConfig& c, double bandwidth_hz) {
  SystemParams p;
  p.carrier_hz = c.carrier_hz;
  p.bandwidth_hz = bandwidth_hz;
  p.n_subcarriers = c.n_subcarriers;
  p.n_symbols = c.n_symbols;
  p.eirp_w = c.eirp_w;
  p.gain_tx = c.gain_tx;
  p.gain_rx = c.gain_rx;
  p.noise_figure_db = c.noise_figure_db;
  p.cp_fraction = c.cp_fraction;
  return p;
}

ArrayGeometry make_geometry(const ScenarioConfig& c, SpacingMode mode) {
  return build_array(mode, c.n_tx, c.n_rx, c.carrier_hz);
}

ArrayGeometry make_geometry(const ScenarioConfig& c) { return make_geometry(c, c.spacing_mode); }

ExperimentArm make_arm(const ScenarioConfig& c, std::string_view arm, double bandwidth_hz) {
  ExperimentArm a;
  if (arm == "ff") {
    a.spacing = SpacingMode::HalfWavelength;
  } else if (arm == "elas") {
    a.spacing = SpacingMode::Elas;
  } else {
    throw ConfigError("unknown arm '" + std::string(arm) + "' (expected ff or elas)");
  }
  a.label = std::string(arm);
  a.n_tx = c.n_tx;
  a.n_rx = c.n_rx;
  a.system = system_params(c, bandwidth_hz);
  a.detector = c.detector;
  a.gospa = c.gospa;
  a.rcs = c.rcs_m2;
  a.target = c.target;
  a.roi_size = c.roi_size_m;
  a.roi_spacing = c.roi_spacing_m;
  return a;
}

}  // namespace nfis
