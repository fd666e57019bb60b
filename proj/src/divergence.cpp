#include "infogeo/divergence.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <sstream>

namespace infogeo {

namespace {

double clamp_divergence(double value, const char* label) {
    if (value >= 0.0) return value;
    if (value >= -1e-10) return 0.0;
    std::ostringstream msg;
    msg << label << ": value " << value << " is below the round-off floor -1e-10";
    throw NumericError(msg.str());
}

} // namespace

namespace detail {

double bregman_raw(const Generator& gen, const Vec& x, const Vec& m) {
    double acc = 0.0;
    for (int a = 0; a < x.size(); ++a) {
        acc += gen.F(x(a)) - gen.F(m(a)) - (x(a) - m(a)) * gen.f(m(a));
    }
    return acc;
}

} // namespace detail

double bregman_divergence(const Generator& gen, const Distribution& x, const Distribution& m) {
    if (x.size() != m.size()) {
        throw ContractViolation("bregman_divergence: alphabet mismatch");
    }
    return clamp_divergence(detail::bregman_raw(gen, x.weights(), m.weights()),
                            "bregman_divergence");
}

double u_divergence(const USpec& u, const Distribution& x, const Distribution& m) {
    if (x.size() != m.size()) {
        throw ContractViolation("u_divergence: alphabet mismatch");
    }
    double acc = 0.0;
    for (int a = 0; a < x.size(); ++a) {
        const double lo = u.f_inv(x(a));
        const double hi = u.f_inv(m(a));
        if (u.has_U()) {
            acc += u.U(hi) - u.U(lo) - x(a) * (hi - lo);
        } else {
            const double xa = x(a);
            acc += adaptive_simpson([&u, xa](double t) { return u.g(t) - xa; }, lo, hi);
        }
    }
    return clamp_divergence(acc, "u_divergence");
}

double entropy(const Generator& gen, const Distribution& x) {
    double acc = 0.0;
    for (int a = 0; a < x.size(); ++a) acc -= gen.F(x(a));
    return acc;
}

Question log_map(const Generator& gen, const Distribution& m) {
    Vec values(m.size());
    for (int a = 0; a < m.size(); ++a) values(a) = gen.f(m(a));
    return Question(values);
}

} // namespace infogeo
