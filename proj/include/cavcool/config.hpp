#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavcool/analytics.hpp"
#include "cavcool/geometry.hpp"
#include "cavcool/model.hpp"

namespace cavcool {

// Parsed INI text: [section] headers over key = value lines, '#'/';' comments.
// Parsing is strict about syntax only; schema checks happen in the config
// builder so error messages can name the offending key.
struct IniFile {
    std::map<std::string, std::map<std::string, std::string>> sections;
};

IniFile parse_ini(const std::string& text, const std::string& source_name);

struct RunConfig {
    SystemParams base;                     // n_atoms is overwritten per sweep point
    LatticeProvenance::Kind lattice_kind = LatticeProvenance::Kind::Base;
    int winding = 0;
    int step_count = 1;                    // shift grid size L
    std::vector<int> n_values;             // sweep axis: array sizes
    std::vector<int> step_values;          // sweep axis: shift steps l
    std::string output_path = "results.csv";
    double validity_threshold = 0.1;
    int workers = 0;                       // 0 = hardware concurrency
    std::optional<FeasibilityInputs> feasibility;
};

// Builds a RunConfig from INI text, applying "section.key=value" overrides on
// top.  Unknown sections, unknown keys, malformed values, and inconsistent
// parameter combinations all throw ConfigInvalid.
RunConfig parse_run_config(const std::string& text, const std::string& source_name,
                           const std::vector<std::string>& overrides = {});

RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides = {});

// Maps a preset name or filesystem path to a config file: tries the argument
// itself, then the bundled preset directory, with or without ".ini".
std::string resolve_config_path(const std::string& name_or_path);

// Names of the bundled preset files (sorted, without extension).
std::vector<std::string> list_presets();

// Integer grids: "4", "4,10,20", "4..120", "4..120:2" (inclusive, step > 0).
std::vector<int> parse_int_grid(const std::string& text, const std::string& key);

} // namespace cavcool
