#pragma once

#include "infogeo/divergence.hpp"
#include "infogeo/manifold.hpp"

namespace infogeo {

enum class SolveMethod {
    auto_newton,       // scoring-matrix Newton, gradient fallback when not PD
    gradient_descent,  // force the fallback path
};

struct SolverOptions {
    double tol_grad = 1e-9;          // stationarity: ||grad D||_2 at the solution
    int max_iter = 500;
    int n_starts = 8;                // low-discrepancy multistart
    double agreement_tol = 1e-6;     // max |theta_i - theta_j|_inf across starts
    std::uint64_t seed = kDefaultSeed;
    SolveMethod method = SolveMethod::auto_newton;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
};

struct ProjectionResult {
    Vec theta_star;
    Distribution m_star;
    double divergence_at_min = 0.0;
    double gradient_norm = 0.0;
    bool converged = false;
    bool multistart_agreement = false;
    int iterations = 0;
};

// Thrown when no start reaches stationarity within the iteration cap;
// carries the best iterate found.
class SolverError : public NumericError {
public:
    SolverError(const std::string& what, ProjectionResult best_result)
        : NumericError(what), best(std::move(best_result)) {}
    ProjectionResult best;
};

// Model map: theta minimizing D(x||m_theta) over the manifold domain.
// Runs n_starts independent solves from low-discrepancy starting points;
// multistart_agreement records whether they all converged to the same
// parameter, which is what the uniqueness assumption predicts.
ProjectionResult project(const Generator& gen, const ModelManifold& manifold,
                         const Distribution& x, const SolverOptions& opts = {});

// Gradient of theta -> D(x||theta):
//   g_k = -sum_a [x(a) - m(a)] f'(m(a)) dm(a)/dtheta^k
Vec projection_gradient(const Generator& gen, const ModelManifold& manifold,
                        const Distribution& x, const Vec& theta);

// xi(m) = zeta(m) + <m|Lm>. For Bregman divergences the defining supremum
// is attained at x = m, so this evaluation is exact.
double corrector(const Generator& gen, const Distribution& m);

// Divergence between model points, D(m_theta || m_eta), evaluated as the
// plug-in value bregman_divergence(m_theta, m_eta): x = m_theta attains the
// fiber infimum for Bregman divergences.
double model_divergence(const Generator& gen, const ModelManifold& manifold,
                        const Vec& theta, const Vec& eta);

struct CrosscheckOptions {
    int n_samples = 20;
    double radius = 0.05;
    std::uint64_t seed = kDefaultSeed;
    double slack = 1e-8;
    SolverOptions solver;
};

struct CrosscheckOutcome {
    double divergence = 0.0;     // the plug-in value
    double min_sampled = 0.0;    // smallest D(x||m_eta) over verified fiber points
    int n_verified = 0;
};

// Plug-in model divergence plus a sampled guard: minimizes D(x||m_eta) over
// verified fiber points of theta and raises NumericError if any sampled
// value undercuts the plug-in value by more than the slack.
CrosscheckOutcome model_divergence_crosschecked(const Generator& gen,
                                                const ModelManifold& manifold,
                                                const Vec& theta, const Vec& eta,
                                                const CrosscheckOptions& opts = {});

} // namespace infogeo
