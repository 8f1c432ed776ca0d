// SPDX-License-Identifier: Apache-2.0
#pragma once

// Flat key-value scenario files:
//
//   # comment
//   seed = 7
//   frequencies = 250, 1000, 2000
//   snr_db = inf
//   mic = <x> <y> <directivity record>      (repeatable; replaces the random array)
//
// Keys mirror ScenarioConfig field names.

#include <stdexcept>
#include <string>
#include <string_view>

#include "rkbeam/simharness.hpp"

namespace rkbeam::sim
{

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

ScenarioConfig parse_config(std::string_view text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::string& path);
std::string format_config(const ScenarioConfig& cfg);

/// Parses one value the way the config file does (used by CLI overrides).
void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);

} // namespace rkbeam::sim
