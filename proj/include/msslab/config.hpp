#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace msslab {

// Parsed configuration. Defaults are the desk-scale values used by the
// acceptance suite.
struct ExperimentConfig {
    // [form]
    int n = 3;
    std::string source = "synthetic";  // synthetic | lift | degenerate
    std::uint64_t form_seed = 1;
    double vartheta = 0.0;
    std::string label = "synthetic3";
    std::string ap_file = "builtin:delta";  // lift only: builtin:delta or a path
    std::uint32_t ap_bound = 0;             // builtin:delta prime bound, 0 means M
    std::uint32_t M = 2100000;

    // [experiment]
    double X = 1e6;
    std::vector<double> L = {5, 10, 20, 40};
    std::vector<double> Delta;  // empty means X^{3/4}
    double theta = 0.3;
    double eps = 0.01;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    std::uint32_t P_max = 10000;
    int k_max = 64;
    std::uint32_t series_cutoff = 0;  // 0 means M
    std::uint32_t rankin_x = 1000000;
    std::vector<double> omega_y = {10, 100, 1000, 10000};
    std::vector<int> omega_nu = {0, 1};
    std::vector<int> omega_k = {1, 2};
    double omega_delta = 0.01;
    double omega_Lambda = 10.0;
    double omega_Y = 0.0;  // 0 means 10 (2/n) y^{1/n}

    // [output]
    std::filesystem::path out_dir = "out";
    std::filesystem::path cache_dir = "cache";

    std::string command;
};

// Every key the parser accepts, as "section.key".
const std::vector<std::string>& config_keys();

// Sets one field from its textual value. ConfigError names the field.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Range checks across all fields; ConfigError names the first bad field.
void validate(const ExperimentConfig& cfg);

// INI-style text: [form], [experiment], [output] sections of key = value,
// '#' or ';' comments. Unknown sections or keys are ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::string& origin);
ExperimentConfig load_config(const std::filesystem::path& path);

// (section.key, value) for every field, values in the same text form the
// parser reads back.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg);

// Rebuilds a config from the "config.<section>.<key>=value" lines of a run
// manifest.
ExperimentConfig config_from_manifest(const std::filesystem::path& manifest);

}  // namespace msslab
