#ifndef KSE_CONFIG_HPP
#define KSE_CONFIG_HPP

#include <map>
#include <string>

#include "kse/experiment.hpp"

namespace kse {

// Flat key/value config with INI-style sections. Keys are stored as
// "section.key". Lines starting with # or ; are comments. Every key has a
// default reproducing the baseline experiment, so an empty map (or missing
// file) is a valid spec.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries read_config_entries(const std::string& path);

// Apply one "section.key=value" override string on top of parsed entries.
void apply_override(ConfigEntries& entries, const std::string& assignment);

// Build a validated spec. Throws std::invalid_argument on unknown keys or
// malformed values, naming the offender.
ExperimentSpec spec_from_entries(const ConfigEntries& entries);

// Documented key list (section.key -> description), for --help and the README.
const std::map<std::string, std::string>& config_key_reference();

} // namespace kse

#endif
