// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

namespace nfis {

inline constexpr double kPi = std::numbers::pi;

/// Propagation speed used throughout. The rounded value reproduces the
/// tabulated apertures (d_r = 0.08 m at 60 GHz) and c/2B resolutions.
inline constexpr double kSpeedOfLight = 3.0e8;

inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kReferenceTemperature = 290.0;

}  // namespace nfis
