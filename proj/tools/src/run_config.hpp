#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracfit/gl.hpp"
#include "fracfit/identify.hpp"

namespace fracfit::cli {

struct OutputPaths {
    std::string report = "report.json";
    std::string step_curve;  // default derived from the report path
    std::string ramp_curve;
};

/// File/flag form of an experiment: the target system, the experiment
/// configuration, optional measured-data paths, and output locations.
struct RunConfig {
    std::vector<FractionalTerm> target;
    std::vector<int> powers;  // explicit template, needed when no target is given
    ExperimentConfig experiment;
    std::optional<double> box_lo;  // scalar bounds, broadcast once dims are known
    std::optional<double> box_hi;
    std::map<Excitation, std::string> observations;
    OutputPaths outputs;

    // Track which values were stated explicitly so ingested observation
    // grids can fill in the rest without conflicting silently.
    bool dt_explicit = false;
    bool t_end_explicit = false;
    bool inputs_explicit = false;
};

/// Loads a JSON RunConfig; errors carry the offending field path.
RunConfig load_run_config(const std::string& path);

/// Parses "coeff:order,coeff:order,..." into denominator terms.
std::vector<FractionalTerm> parse_target_spec(const std::string& spec);

/// Parses a comma-separated list of numbers.
std::vector<double> parse_double_list(const std::string& spec, const std::string& what);

std::vector<int> parse_int_list(const std::string& spec, const std::string& what);

/// "full" or a positive number of seconds.
std::optional<double> parse_memory(const std::string& spec);

/// Report serialization: all IdentificationReport fields plus the effective
/// configuration echo (target or observation paths included), with byte
/// stability for identical configs and seeds.
nlohmann::ordered_json config_echo_json(const RunConfig& rc);
nlohmann::ordered_json report_json(const IdentificationReport& report, const RunConfig& rc);

}  // namespace fracfit::cli
