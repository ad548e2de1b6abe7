// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nfis {

/// Invalid scenario or configuration input (bad keys, out-of-range values,
/// target dimensions that do not tile). The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nfis
