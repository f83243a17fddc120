#include "wavemera/error.hpp"

namespace wavemera {

const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::LatticeTooSmall: return "LatticeTooSmall";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NotNonnegative: return "NotNonnegative";
    case ErrorKind::NormalizationFailure: return "NormalizationFailure";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::DegenerateFactorization: return "DegenerateFactorization";
    case ErrorKind::GaplessUnregulated: return "GaplessUnregulated";
    case ErrorKind::OutOfHypothesis: return "OutOfHypothesis";
    case ErrorKind::UnstableFilter: return "UnstableFilter";
    case ErrorKind::NoUnitEigenvalue: return "NoUnitEigenvalue";
    case ErrorKind::NotDivisible: return "NotDivisible";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what, nlohmann::json details)
    : std::runtime_error(what), kind_(kind), details_(std::move(details))
{
}

nlohmann::json Error::to_json() const
{
    return {{"error", to_string(kind_)}, {"message", what()}, {"details", details_}};
}

} // namespace wavemera
