#include "msslab/error.hpp"

namespace msslab {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::NearDegenerateAlphas: return "NearDegenerateAlphas";
        case Errc::SelfDualViolation: return "SelfDualViolation";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::ParseError: return "ParseError";
        case Errc::MissingPrime: return "MissingPrime";
        case Errc::PoleProximity: return "PoleProximity";
        case Errc::Diverges: return "Diverges";
        case Errc::RangeExceeded: return "RangeExceeded";
        case Errc::InadmissibleParams: return "InadmissibleParams";
        case Errc::HypothesisViolated: return "HypothesisViolated";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::Unsupported: return "Unsupported";
        case Errc::ConfigError: return "ConfigError";
        case Errc::IoError: return "IoError";
        case Errc::CorruptCache: return "CorruptCache";
    }
    return "Unknown";
}

int exit_code_for(Errc code) noexcept {
    switch (code) {
        case Errc::ConfigError:
        case Errc::InvalidArgument:
        case Errc::ParseError:
        case Errc::MissingPrime:
        case Errc::OutOfRange:
        case Errc::RangeExceeded:
        case Errc::Unsupported:
            return 2;
        case Errc::InadmissibleParams:
        case Errc::HypothesisViolated:
            return 3;
        case Errc::NonConvergence:
        case Errc::Diverges:
        case Errc::PoleProximity:
        case Errc::NearDegenerateAlphas:
        case Errc::SelfDualViolation:
            return 4;
        case Errc::IoError:
        case Errc::CorruptCache:
            return 5;
    }
    return 1;
}

}  // namespace msslab
