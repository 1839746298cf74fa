#pragma once

#include <stdexcept>
#include <string>

namespace omcorr {

/// Rejected input: out-of-range, non-finite or inconsistent parameters.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The drift matrix has an eigenvalue with non-negative real part.
class NoSteadyState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine failed to converge or missed its residual target.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A covariance matrix (or a quantity derived from it) violates the
/// uncertainty principle beyond round-off.
class PhysicalityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time integration ran out of horizon before reaching steady state.
class IntegrationTimeout : public SolverFailure {
public:
    IntegrationTimeout(const std::string& what, double last_residual)
        : SolverFailure(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// File could not be opened, read or written; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace omcorr
