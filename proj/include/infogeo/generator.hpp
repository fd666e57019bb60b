#pragma once

#include "infogeo/core.hpp"

#include <functional>
#include <optional>
#include <string>

namespace infogeo {

using ScalarFn = std::function<double(double)>;

// Strictly convex generator F on (0, 1] together with its first two
// derivatives f = F' and f'. Construction runs grid checks: f' > 0 on the
// interior and a central-difference match between F and f.
class Generator {
public:
    Generator(std::string name, ScalarFn F, ScalarFn f, ScalarFn fprime);

    double F(double u) const { return F_(u); }
    double f(double u) const { return f_(u); }
    double fprime(double u) const { return fprime_(u); }
    const std::string& name() const { return name_; }

    // F(u) = u ln u, the Boltzmann-Gibbs-Shannon case.
    static Generator kl();
    // F(u) = u^2, squared-distance divergence.
    static Generator euclidean();

private:
    std::string name_;
    ScalarFn F_;
    ScalarFn f_;
    ScalarFn fprime_;
};

// Deformed logarithm f(u) = integral from 1 to u of dv / phi(v), for a
// positive nondecreasing phi. A declared power phi(v) = v^q unlocks
// closed forms; otherwise values come from adaptive quadrature.
class DeformedLog {
public:
    static DeformedLog power(double q);
    static DeformedLog from_phi(ScalarFn phi);

    double value(double u) const;
    double phi(double v) const;
    std::optional<double> q() const { return q_; }

private:
    DeformedLog() = default;
    ScalarFn phi_;
    std::optional<double> q_;
};

// ln_phi(u); domain error for u <= 0.
double deformed_log(const DeformedLog& spec, double u);

// Generator with f equal to the deformed logarithm, f' = 1/phi, and
// F(u) the antiderivative of f vanishing at u = 1.
Generator generator_from_deformed_log(const DeformedLog& spec, std::string name = "");

// Alternative divergence built from a convex increasing U with g = U' and
// f the inverse of g. U itself may be omitted, in which case the
// divergence integral is evaluated by quadrature instead of the
// antiderivative identity.
class USpec {
public:
    USpec(ScalarFn g, ScalarFn f_inv, ScalarFn U = nullptr, std::string name = "custom");

    double g(double u) const { return g_(u); }
    double f_inv(double u) const { return f_inv_(u); }
    bool has_U() const { return static_cast<bool>(U_); }
    double U(double u) const { return U_(u); }
    const std::string& name() const { return name_; }

    // U = exp: g = exp, f = ln. The induced divergence is the KL divergence
    // on normalized inputs.
    static USpec exponential();
    // U = u^2/2: g(u) = u, f(u) = u. Half squared distance.
    static USpec quadratic();

private:
    ScalarFn g_;
    ScalarFn f_inv_;
    ScalarFn U_;
    std::string name_;
};

} // namespace infogeo
