#pragma once

#include <stdexcept>
#include <string>

namespace msslab {

enum class Errc {
    InvalidArgument,
    NearDegenerateAlphas,
    SelfDualViolation,
    OutOfRange,
    ParseError,
    MissingPrime,
    PoleProximity,
    Diverges,
    RangeExceeded,
    InadmissibleParams,
    HypothesisViolated,
    NonConvergence,
    Unsupported,
    ConfigError,
    IoError,
    CorruptCache,
};

const char* errc_name(Errc code) noexcept;

// Process exit status used by the CLI for an error of this kind.
int exit_code_for(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace msslab
