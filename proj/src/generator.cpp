#include "infogeo/generator.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace infogeo {

namespace {

std::vector<double> validation_grid() {
    std::vector<double> grid{1e-3, 1e-2};
    for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
    return grid;
}

} // namespace

Generator::Generator(std::string name, ScalarFn F, ScalarFn f, ScalarFn fprime)
    : name_(std::move(name)), F_(std::move(F)), f_(std::move(f)), fprime_(std::move(fprime)) {
    if (!F_ || !f_ || !fprime_) {
        throw ContractViolation("Generator: F, f, and f' are all required");
    }
    for (const double u : validation_grid()) {
        const double deriv2 = fprime_(u);
        if (!(deriv2 > 0.0) || !std::isfinite(deriv2)) {
            std::ostringstream msg;
            msg << "Generator '" << name_ << "': f'(" << u << ") = " << deriv2
                << " breaks strict convexity";
            throw ContractViolation(msg.str());
        }
        const double h = 1e-6 * std::max(1.0, u);
        const double fd = (F_(u + h) - F_(u - h)) / (2.0 * h);
        const double fu = f_(u);
        if (std::abs(fd - fu) > 1e-6 * std::max(1.0, std::abs(fu))) {
            std::ostringstream msg;
            msg << "Generator '" << name_ << "': f(" << u << ") = " << fu
                << " disagrees with the difference quotient " << fd << " of F";
            throw ContractViolation(msg.str());
        }
    }
}

Generator Generator::kl() {
    return Generator(
        "kl", [](double u) { return u * std::log(u); },
        [](double u) { return std::log(u) + 1.0; }, [](double u) { return 1.0 / u; });
}

Generator Generator::euclidean() {
    return Generator(
        "euclidean", [](double u) { return u * u; }, [](double u) { return 2.0 * u; },
        [](double) { return 2.0; });
}

DeformedLog DeformedLog::power(double q) {
    DeformedLog spec;
    spec.q_ = q;
    spec.phi_ = [q](double v) { return std::pow(v, q); };
    return spec;
}

DeformedLog DeformedLog::from_phi(ScalarFn phi) {
    if (!phi) {
        throw ContractViolation("DeformedLog: phi is required");
    }
    double prev = 0.0;
    for (int i = 0; i <= 30; ++i) {
        const double v = 0.05 + i * (10.0 - 0.05) / 30.0;
        const double p = phi(v);
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw ContractViolation("DeformedLog: phi must be positive on the tested grid");
        }
        if (i > 0 && p < prev * (1.0 - 1e-12)) {
            throw ContractViolation("DeformedLog: phi must be nondecreasing on the tested grid");
        }
        prev = p;
    }
    DeformedLog spec;
    spec.phi_ = std::move(phi);
    return spec;
}

double DeformedLog::value(double u) const {
    if (!(u > 0.0)) {
        throw DomainError("deformed_log: argument must be positive");
    }
    if (q_) {
        const double q = *q_;
        if (q == 1.0) return std::log(u);
        // (u^{1-q} - 1) / (1 - q), written to stay accurate near u = 1.
        return std::expm1((1.0 - q) * std::log(u)) / (1.0 - q);
    }
    return adaptive_simpson([this](double v) { return 1.0 / phi_(v); }, 1.0, u);
}

double DeformedLog::phi(double v) const {
    return phi_(v);
}

double deformed_log(const DeformedLog& spec, double u) {
    return spec.value(u);
}

Generator generator_from_deformed_log(const DeformedLog& spec, std::string name) {
    if (name.empty()) {
        std::ostringstream label;
        if (spec.q()) {
            label << "qlog(q=" << *spec.q() << ")";
        } else {
            label << "deformed_log";
        }
        name = label.str();
    }
    ScalarFn f = [spec](double u) { return spec.value(u); };
    ScalarFn fprime = [spec](double u) {
        if (!(u > 0.0)) throw DomainError("deformed generator: argument must be positive");
        return 1.0 / spec.phi(u);
    };
    ScalarFn F;
    if (spec.q()) {
        const double q = *spec.q();
        if (q == 1.0) {
            F = [](double u) { return u * std::log(u) - u + 1.0; };
        } else if (q == 2.0) {
            F = [](double u) { return (u - 1.0) - std::log(u); };
        } else {
            F = [q](double u) {
                return (std::pow(u, 2.0 - q) - 1.0) / ((1.0 - q) * (2.0 - q)) -
                       (u - 1.0) / (1.0 - q);
            };
        }
    } else {
        F = [f](double u) { return adaptive_simpson(f, 1.0, u, 1e-10, 10000); };
    }
    return Generator(std::move(name), std::move(F), std::move(f), std::move(fprime));
}

USpec::USpec(ScalarFn g, ScalarFn f_inv, ScalarFn U, std::string name)
    : g_(std::move(g)), f_inv_(std::move(f_inv)), U_(std::move(U)), name_(std::move(name)) {
    if (!g_ || !f_inv_) {
        throw ContractViolation("USpec: g and its inverse are required");
    }
    double prev_g = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double u = 0.05 * i;
        const double gu = g_(u);
        if (i > 1 && !(gu > prev_g)) {
            throw ContractViolation("USpec: g must be increasing on the tested grid");
        }
        prev_g = gu;
        const double round_trip = f_inv_(gu);
        if (std::abs(round_trip - u) > 1e-8 * std::max(1.0, u)) {
            std::ostringstream msg;
            msg << "USpec '" << name_ << "': f_inv(g(" << u << ")) = " << round_trip
                << " is not the identity";
            throw ContractViolation(msg.str());
        }
    }
}

USpec USpec::exponential() {
    return USpec([](double u) { return std::exp(u); }, [](double u) { return std::log(u); },
                 [](double u) { return std::exp(u); }, "exponential");
}

USpec USpec::quadratic() {
    return USpec([](double u) { return u; }, [](double u) { return u; },
                 [](double u) { return 0.5 * u * u; }, "quadratic");
}

} // namespace infogeo
