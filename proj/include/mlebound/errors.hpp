#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlebound {

enum class ErrorKind {
    Domain,
    NotPD,
    NonPDFisher,
    NoConvergence,
    DegenerateData,
    DegenerateDesign,
    RankDeficient,
    NonInterior,
    ConditioningStarved,
    MissingClosedForm,
    MissingSupportRadius,
    NonAdmissible,
    GateFailed,
    TooManyRejections,
    NonPositiveValue,
    EmptyConditioningEvent,
    Config,
    Io,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Carries the smallest admissible sample size.
class GateFailedError : public Error {
public:
    GateFailedError(std::uint64_t n_min, std::uint64_t n)
        : Error(ErrorKind::GateFailed,
                "n=" + std::to_string(n) + " below gate, n_min=" + std::to_string(n_min)),
          n_min_(n_min) {}
    std::uint64_t n_min() const noexcept { return n_min_; }

private:
    std::uint64_t n_min_;
};

}  // namespace mlebound
