#pragma once

#include "beliefsim/experiment.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace beliefsim {

/// Command-line values that take precedence over the config file.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> sigma;
    std::optional<long long> steps;
    std::optional<InfluenceMode> mode;
};

/// A run config and a sweep config sharing one set of simulation fields.
struct ParsedConfig {
    SimConfig sim;
    SweepConfig sweep;  // sweep.base == sim
};

/// Parses flat `key = value` text. Blank lines and `#` comments are ignored.
/// Keys are the SimConfig and SweepConfig field names; grids are
/// comma-separated. Unknown keys, duplicates and bad values raise ConfigError
/// naming the key.
ParsedConfig parse_config_text(std::string_view text, const ConfigOverrides& overrides = {});

/// Reads `path` (empty path: defaults only) and applies `overrides`.
ParsedConfig parse_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

InfluenceMode parse_mode(std::string_view text);
std::string_view mode_name(InfluenceMode mode);

/// Canonical `key = value` listing of every field, readable by parse_config_text.
std::string format_config(const SweepConfig& sweep);

}  // namespace beliefsim
