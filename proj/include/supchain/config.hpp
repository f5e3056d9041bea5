#pragma once

#include <stdexcept>
#include <string>

#include "supchain/montecarlo.hpp"

namespace supchain {

// Rejected configuration input, carrying the offending key for diagnostics.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Parsed configuration file: the experiment plus output destinations.
struct LabConfig {
  ExperimentConfig experiment;
  std::string out_csv;   // empty: stdout only
  std::string out_json;  // empty: stdout only
};

// Key = value format, one pair per line, '#' starts a comment.  Unknown keys
// and malformed values raise ConfigError; range violations surface through
// ExperimentConfig::validate.
LabConfig parse_config_text(const std::string& text);
LabConfig load_config(const std::string& path);

// Render a config back to the accepted text format (used by tests and the
// JSON run summary).
std::string config_to_text(const LabConfig& config);

}  // namespace supchain
