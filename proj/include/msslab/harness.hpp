#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "msslab/config.hpp"
#include "msslab/satake.hpp"

namespace msslab {

const char* version_string() noexcept;

const std::vector<std::string>& commands();

struct RunOptions {
    bool force = false;
    unsigned threads = 0;  // recorded in the manifest; the caller sets the pool size
    std::ostream* log = nullptr;  // progress and warnings, nullptr for silence
};

struct RunOutcome {
    int exit_code = 0;
    std::string message;
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> files;
};

// Builds the FormSpec for a config. builtin:delta a_p data is generated on
// first use into <cache_dir>/delta-<bound>.ap and read back from there, so the
// form fingerprint depends only on that file.
FormSpec resolve_form(const ExperimentConfig& cfg, std::ostream& log);

// Runs one command; files go to <out_dir>/<command>/, including manifest.txt.
// Errors are mapped to exit codes (2 config, 3 inadmissible, 4 non-convergence,
// 5 I/O) and recorded in the manifest; nothing is thrown for them.
RunOutcome run(const std::string& command, const ExperimentConfig& cfg, const RunOptions& options);

}  // namespace msslab
