#pragma once

#include <stdexcept>
#include <string>

namespace blfctl {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A constrained error channel reached (or crossed) its barrier bound. The
/// barrier gain is undefined there; a simulation must abort and report the
/// violation rather than clamp it away.
struct ConstraintBoundaryReached : Error {
    std::string channel;
    int index;
    double value;
    double bound;
    ConstraintBoundaryReached(std::string channel_, int index_, double value_, double bound_)
        : Error("constraint boundary reached: " + channel_ + "[" + std::to_string(index_) +
                "] = " + std::to_string(value_) + ", bound " + std::to_string(bound_)),
          channel(std::move(channel_)), index(index_), value(value_), bound(bound_) {}
};

struct NotSkewSymmetric : Error {
    explicit NotSkewSymmetric(double defect)
        : Error("matrix is not skew-symmetric (||M + M^T|| = " + std::to_string(defect) + ")") {}
};

struct NonOrthonormalInput : Error {
    explicit NonOrthonormalInput(const std::string& what) : Error(what) {}
};

struct ZeroThrustDirection : Error {
    ZeroThrustDirection() : Error("thrust command has (near-)zero magnitude") {}
};

struct DegenerateThrustDirection : Error {
    DegenerateThrustDirection() : Error("degenerate desired-attitude construction") {}
};

struct SingularInertia : Error {
    explicit SingularInertia(const std::string& what) : Error(what) {}
};

struct NonPositiveMass : Error {
    explicit NonPositiveMass(double m)
        : Error("resulting mass is non-positive: " + std::to_string(m)) {}
};

struct InvalidUncertaintyBound : Error {
    explicit InvalidUncertaintyBound(double e)
        : Error("uncertainty fraction must lie in [0,1): " + std::to_string(e)) {}
};

struct NumericFailure : Error {
    explicit NumericFailure(const std::string& what) : Error(what) {}
};

struct InfeasibleInitialCondition : Error {
    explicit InfeasibleInitialCondition(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace blfctl
