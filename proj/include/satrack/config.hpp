#pragma once

#include <stdexcept>
#include <string>

#include "satrack/trainer.hpp"

namespace satrack {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All configuration keys with their defaults; missing keys keep the default,
// unknown keys are errors.
ExperimentConfig default_config();

// Flat key=value text; '#' starts a comment. Throws ConfigError with the
// field name and line number on parse, range, or unknown-key errors.
ExperimentConfig parse_config_text(const std::string& text);

ExperimentConfig load_config(const std::string& path);

// Canonical round-trippable form (parse_config_text(config_to_text(c)) == c).
std::string config_to_text(const ExperimentConfig& cfg);

}  // namespace satrack
