#pragma once

#include <stdexcept>
#include <string>

namespace infogeo {

// Invalid numerical input: weights outside the open simplex, non-positive
// arguments to a deformed logarithm, parameters outside the model domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller broke an API precondition (mismatched alphabets, evaluating the
// Fisher matrix away from a verified minimum, grid too small).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A computation produced results outside its guaranteed tolerance band:
// quadrature that did not converge, a divergence below the round-off floor,
// a singular reparametrization jacobian.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace infogeo
