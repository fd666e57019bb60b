#pragma once

#include "infogeo/core.hpp"
#include "infogeo/generator.hpp"

namespace infogeo {

// D(x||m) = sum_a [ F(x(a)) - F(m(a)) - (x(a) - m(a)) f(m(a)) ].
// Values in [-1e-10, 0) are round-off and clamp to 0; anything below
// -1e-10 raises NumericError.
double bregman_divergence(const Generator& gen, const Distribution& x, const Distribution& m);

// D_U(x||m) = sum_a integral from f(x(a)) to f(m(a)) of [g(u) - x(a)] du.
// Uses U(f(m)) - U(f(x)) - x (f(m) - f(x)) per symbol when U is available,
// adaptive quadrature otherwise.
double u_divergence(const USpec& u, const Distribution& x, const Distribution& m);

// zeta(x) = -sum_a F(x(a))
double entropy(const Generator& gen, const Distribution& x);

// L m = f(m(.)), the logarithmic map.
Question log_map(const Generator& gen, const Distribution& m);

namespace detail {
// Unclamped Bregman sum, for finite differencing near a minimum where the
// clamp would flatten genuine curvature information.
double bregman_raw(const Generator& gen, const Vec& x, const Vec& m);
} // namespace detail

} // namespace infogeo
