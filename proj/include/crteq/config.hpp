#pragma once

// `key = value` experiment configuration files. `#` starts a comment.

#include <iosfwd>
#include <string>
#include <vector>

#include "crteq/experiments.hpp"

namespace crteq {

/// Bad configuration or usage; maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Every accepted key, in echo order.
const std::vector<std::string>& config_keys();

/// Sets one key; throws ConfigError on an unknown key or bad value.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Parses a file body over `base`. Duplicate keys are rejected.
ExperimentConfig parse_config(std::istream& in, const std::string& source, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path);

/// Canonical `key = value` listing that parses back to the same config.
std::string echo_config(const ExperimentConfig& config, bool include_threads = true);

}  // namespace crteq
