#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace wavemera {

enum class ErrorKind {
    LatticeTooSmall,
    NegativeMass,
    NoSolution,
    NotNonnegative,
    NormalizationFailure,
    NotAdmissible,
    DegenerateFactorization,
    GaplessUnregulated,
    OutOfHypothesis,
    UnstableFilter,
    NoUnitEigenvalue,
    NotDivisible,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, nlohmann::json details = nlohmann::json::object());

    ErrorKind kind() const { return kind_; }
    const nlohmann::json& details() const { return details_; }
    nlohmann::json to_json() const;

private:
    ErrorKind kind_;
    nlohmann::json details_;
};

} // namespace wavemera
