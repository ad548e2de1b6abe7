// SPDX-License-Identifier: Apache-2.0
#include "nfis/signal.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "nfis/constants.hpp"

namespace nfis {

double SystemParams::amplitude_scale(int n_tx) const {
  return std::sqrt(tx_power(n_tx) * gain_tx * gain_rx / n_subcarriers);
}

double SymbolGrid::energy() const {
  double e = 0.0;
  for (const auto& x : entries) e += std::norm(x);
  return e;
}

SymbolGrid generate_symbols(int k, int m, std::uint64_t seed) {
  if (k < 1 || m < 1) throw std::invalid_argument("generate_symbols: K and M must be >= 1");
  static const double h = 1.0 / std::sqrt(2.0);
  static const cdouble constellation[4] = {{h, h}, {-h, h}, {-h, -h}, {h, -h}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 3);
  SymbolGrid g;
  g.n_subcarriers = k;
  g.n_symbols = m;
  g.entries.resize(static_cast<std::size_t>(k) * m);
  for (auto& x : g.entries) x = constellation[pick(rng)];
  return g;
}

double noise_variance(double bandwidth, int k, double noise_figure_db) {
  if (!(bandwidth > 0.0) || k < 1) {
    throw std::invalid_argument("noise_variance: bandwidth and K must be positive");
  }
  return kBoltzmann * kReferenceTemperature * std::pow(10.0, noise_figure_db / 10.0) *
         (bandwidth / k);
}

ReceivedGrid synthesize_received(std::span<const Scatterer> scatterers,
                                 std::span<const cdouble> tx_weights, const ArrayGeometry& geom,
                                 const SymbolGrid& frame, const SystemParams& params,
                                 std::uint64_t noise_seed, const SynthesisOptions& options) {
  const int n_rx = geom.n_rx();
  const int K = params.n_subcarriers;
  const int M = params.n_symbols;
  if (frame.n_subcarriers != K || frame.n_symbols != M) {
    throw std::invalid_argument("synthesize_received: frame dimensions do not match parameters");
  }
  if (static_cast<int>(tx_weights.size()) != geom.n_tx()) {
    throw std::invalid_argument("synthesize_received: tx weight length must equal n_tx");
  }
  if (scatterers.empty() && !options.allow_empty) {
    throw std::invalid_argument("synthesize_received: empty scatterer list without noise-only flag");
  }

  ReceivedGrid y;
  y.n_rx = n_rx;
  y.n_subcarriers = K;
  y.n_symbols = M;
  y.noise_var = noise_variance(params.bandwidth_hz, K, params.noise_figure_db);
  y.amp_scale = params.amplitude_scale(geom.n_tx());
  y.entries.assign(static_cast<std::size_t>(n_rx) * K * M, cdouble{0.0, 0.0});

  const double df = params.subcarrier_spacing();
  const double ts = params.symbol_duration();

  // Static scatterers collapse to one N_r x K channel that multiplies x[k, m].
  std::vector<cdouble> static_channel(static_cast<std::size_t>(n_rx) * K, cdouble{0.0, 0.0});
  bool any_static = false;
  std::vector<cdouble> delay_ramp(static_cast<std::size_t>(K));
  std::vector<cdouble> doppler_ramp(static_cast<std::size_t>(M));
  for (const auto& s : scatterers) {
    const cdouble h = effective_gain(s, tx_weights);
    const auto b = rx_nf_steering(s.angle_ref, s.range_ref, geom, options.distance_mode);
    for (int k = 0; k < K; ++k) {
      const double cycles = k * df * s.delay;
      delay_ramp[k] = std::polar(1.0, -2.0 * kPi * (cycles - std::floor(cycles)));
    }
    if (s.doppler == 0.0) {
      any_static = true;
      for (int n = 0; n < n_rx; ++n) {
        const cdouble hb = h * b.entries[n];
        cdouble* row = &static_channel[static_cast<std::size_t>(n) * K];
        for (int k = 0; k < K; ++k) row[k] += hb * delay_ramp[k];
      }
      continue;
    }
    for (int m = 0; m < M; ++m) {
      const double cycles = m * ts * s.doppler;
      doppler_ramp[m] = std::polar(1.0, 2.0 * kPi * (cycles - std::floor(cycles)));
    }
    for (int n = 0; n < n_rx; ++n) {
      const cdouble hb = y.amp_scale * h * b.entries[n];
      for (int k = 0; k < K; ++k) {
        const cdouble c = hb * delay_ramp[k];
        for (int m = 0; m < M; ++m) y.at(n, k, m) += c * doppler_ramp[m] * frame.at(k, m);
      }
    }
  }
  if (any_static) {
    for (int n = 0; n < n_rx; ++n) {
      for (int k = 0; k < K; ++k) {
        const cdouble c = y.amp_scale * static_channel[static_cast<std::size_t>(n) * K + k];
        for (int m = 0; m < M; ++m) y.at(n, k, m) += c * frame.at(k, m);
      }
    }
  }

  if (options.add_noise) {
    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(y.noise_var / 2.0));
    for (auto& v : y.entries) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v += cdouble{re, im};
    }
  }
  return y;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "raw grid dump assumes a little-endian host");

constexpr char kMagic[4] = {'N', 'F', 'I', 'S'};
constexpr std::uint32_t kRawVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("raw grid: truncated input");
  return v;
}

}  // namespace

void write_raw_grid(std::ostream& os, const ReceivedGrid& grid) {
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kRawVersion);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(grid.n_rx));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(grid.n_subcarriers));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(grid.n_symbols));
  for (const auto& v : grid.entries) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
}

ReceivedGrid read_raw_grid(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("raw grid: bad magic");
  if (get<std::uint32_t>(is) != kRawVersion) throw std::runtime_error("raw grid: bad version");
  ReceivedGrid g;
  g.n_rx = static_cast<int>(get<std::uint64_t>(is));
  g.n_subcarriers = static_cast<int>(get<std::uint64_t>(is));
  g.n_symbols = static_cast<int>(get<std::uint64_t>(is));
  g.entries.resize(static_cast<std::size_t>(g.n_rx) * g.n_subcarriers * g.n_symbols);
  for (auto& v : g.entries) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v = {re, im};
  }
  return g;
}

}  // namespace nfis
