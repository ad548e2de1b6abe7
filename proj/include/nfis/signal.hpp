// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nfis/geometry.hpp"
#include "nfis/scene.hpp"
#include "nfis/steering.hpp"

namespace nfis {

/// Radio and frame parameters shared by synthesis and detection.
struct SystemParams {
  double carrier_hz = 60e9;
  double bandwidth_hz = 200e6;
  int n_subcarriers = 1024;
  int n_symbols = 10;
  double eirp_w = 0.1;  // P_t G_t N_t
  double gain_tx = 1.0;
  double gain_rx = 1.0;
  double noise_figure_db = 10.0;
  double cp_fraction = 0.125;  // T_cp as a fraction of 1/df

  double subcarrier_spacing() const { return bandwidth_hz / n_subcarriers; }
  double symbol_duration() const { return (1.0 + cp_fraction) / subcarrier_spacing(); }
  double tx_power(int n_tx) const { return eirp_w / (gain_tx * n_tx); }
  /// sqrt(P_t G_t G_r / K).
  double amplitude_scale(int n_tx) const;
};

/// Transmitted QPSK symbols x[k, m], stored k-major.
struct SymbolGrid {
  int n_subcarriers = 0;
  int n_symbols = 0;
  std::vector<cdouble> entries;

  const cdouble& at(int k, int m) const {
    return entries[static_cast<std::size_t>(k) * n_symbols + m];
  }
  /// Sum of |x|^2 over the frame.
  double energy() const;
};

/// Demodulated symbols y_n[k, m], stored n-major, then k, then m.
struct ReceivedGrid {
  int n_rx = 0;
  int n_subcarriers = 0;
  int n_symbols = 0;
  std::vector<cdouble> entries;
  double noise_var = 0.0;
  double amp_scale = 0.0;

  std::size_t index(int n, int k, int m) const {
    return (static_cast<std::size_t>(n) * n_subcarriers + k) * n_symbols + m;
  }
  cdouble& at(int n, int k, int m) { return entries[index(n, k, m)]; }
  const cdouble& at(int n, int k, int m) const { return entries[index(n, k, m)]; }
};

/// i.i.d. uniform QPSK with unit modulus.
SymbolGrid generate_symbols(int k, int m, std::uint64_t seed);

/// k_B T0 n_F (B / K) with T0 = 290 K.
double noise_variance(double bandwidth, int k, double noise_figure_db);

struct SynthesisOptions {
  bool add_noise = true;
  bool allow_empty = false;  // noise-only frames
  DistanceMode distance_mode = DistanceMode::Exact;
};

/// y_n[k,m] = A sum_p h_p exp(j 2 pi (m Ts fD - k df tau_p)) b_n(theta_p, r_p) x[k,m] + nu.
/// Throws std::invalid_argument on dimension mismatches, non-unit weights,
/// or an empty scatterer list without allow_empty.
ReceivedGrid synthesize_received(std::span<const Scatterer> scatterers,
                                 std::span<const cdouble> tx_weights, const ArrayGeometry& geom,
                                 const SymbolGrid& frame, const SystemParams& params,
                                 std::uint64_t noise_seed, const SynthesisOptions& options = {});

/// Debug dump. 32-byte header: "NFIS", u32 version (1), u64 n_rx, u64 K,
/// u64 M; payload is little-endian f64 (re, im) pairs in n, k, m order.
void write_raw_grid(std::ostream& os, const ReceivedGrid& grid);
ReceivedGrid read_raw_grid(std::istream& is);

}  // namespace nfis
