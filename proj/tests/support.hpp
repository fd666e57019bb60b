#pragma once

#include "infogeo/expfam.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testutil {

using namespace infogeo;

inline Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

inline Question question(std::initializer_list<double> xs) {
    return Question(vec(xs));
}

// Uniform draw from the simplex interior (rejecting points too close to the
// boundary so derivative magnitudes stay testable).
inline Distribution random_interior(int n, std::mt19937_64& rng, double floor = 1e-4) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    while (true) {
        Vec w(n);
        for (int a = 0; a < n; ++a) w(a) = -std::log(unif(rng));
        w /= w.sum();
        if (w.minCoeff() > floor) return Distribution(std::move(w));
    }
}

// Mean-parameter Bernoulli family m_theta = (theta, 1 - theta).
inline ModelManifold mean_bernoulli() {
    return make_manifold(BuiltinManifoldSpec::curved_polynomial(
        (Mat(1, 2) << 0, 1).finished(), 2, ParamBox::cube(1, 0.001, 0.999)));
}

struct NamedConfig {
    std::string label;
    Generator gen;
    BuiltinManifoldSpec spec;
};

// The canonical generator/manifold pairs the property suites sweep over.
// Exponential families use a (-3, 3) box: wide enough to exercise the
// solver, tight enough that model weights stay well inside the simplex.
inline std::vector<NamedConfig> builtin_configs() {
    std::vector<NamedConfig> configs;
    const Question q3 = question({1, 0, -1});
    const Question q2 = question({1, 0});
    const Question q4a = question({1, 0, -1, 0});
    const Question q4b = question({0, 1, 0, -1});

    configs.push_back({"kl+exponential(n=3)", Generator::kl(),
                       BuiltinManifoldSpec::exponential({q3}, ParamBox::cube(1, -3, 3))});
    configs.push_back({"kl+exponential(n=2)", Generator::kl(),
                       BuiltinManifoldSpec::exponential({q2}, ParamBox::cube(1, -3, 3))});
    configs.push_back({"euclidean+exponential(n=3)", Generator::euclidean(),
                       BuiltinManifoldSpec::exponential({q3}, ParamBox::cube(1, -3, 3))});
    configs.push_back({"kl+curved", Generator::kl(), BuiltinManifoldSpec::curved_polynomial()});
    configs.push_back(
        {"euclidean+curved", Generator::euclidean(), BuiltinManifoldSpec::curved_polynomial()});
    configs.push_back({"qlog(0.5)+q_exponential(0.5)",
                       generator_from_deformed_log(DeformedLog::power(0.5)),
                       BuiltinManifoldSpec::q_exponential({q3}, 0.5)});
    configs.push_back({"qlog(2)+q_exponential(2)",
                       generator_from_deformed_log(DeformedLog::power(2.0)),
                       BuiltinManifoldSpec::q_exponential({q3}, 2.0)});
    configs.push_back({"kl+exponential(n=4,d=2)", Generator::kl(),
                       BuiltinManifoldSpec::exponential({q4a, q4b}, ParamBox::cube(2, -3, 3))});
    return configs;
}

// Deterministic interior parameter grid for a manifold domain.
inline std::vector<Vec> domain_grid(const ModelManifold& manifold, int count,
                                    std::uint64_t seed = 7) {
    const ParamBox inner = manifold.domain().shrunk(0.1);
    return halton_points(count, inner.lo, inner.hi, seed);
}

} // namespace testutil
