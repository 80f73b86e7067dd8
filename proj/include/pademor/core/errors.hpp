#pragma once

#include <stdexcept>
#include <string>

#include "pademor/core/types.hpp"

namespace pademor {

// Bad shapes, mismatched spaces, invalid parameters.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Linear solve failed; carries the last residual (relative) and the shift.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual, cplx shift = {})
        : std::runtime_error(what), residual_(residual), shift_(shift) {}
    double residual() const noexcept { return residual_; }
    cplx shift() const noexcept { return shift_; }

private:
    double residual_;
    cplx shift_;
};

class DegeneratePolynomialError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation too close to a root of the denominator.
class PoleProximityError : public std::domain_error {
public:
    PoleProximityError(const std::string& what, double q_abs)
        : std::domain_error(what), q_abs_(q_abs) {}
    double q_abs() const noexcept { return q_abs_; }

private:
    double q_abs_;
};

// Expansion point coincides with a pole of the map.
class PoleAtCenterError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace pademor
