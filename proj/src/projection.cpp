#include "infogeo/projection.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace infogeo {

namespace {

struct Landscape {
    const Generator& gen;
    const ModelManifold& manifold;
    const Vec& x;

    // Objective D(x||theta), unclamped so the landscape stays smooth across
    // the tiny negative round-off band near the minimum.
    std::optional<double> value(const Vec& theta) const {
        if (!manifold.domain().contains(theta)) return std::nullopt;
        Vec m;
        try {
            m = manifold.forward(theta).weights();
        } catch (const DomainError&) {
            return std::nullopt;
        }
        if (m.minCoeff() <= 10.0 * kInteriorFloor) return std::nullopt;
        return detail::bregman_raw(gen, x, m);
    }

    Vec gradient(const Vec& theta, const Vec& m, const Mat& J) const {
        const int d = manifold.param_dim();
        Vec g(d);
        for (int k = 0; k < d; ++k) {
            double acc = 0.0;
            for (int a = 0; a < m.size(); ++a) {
                acc -= (x(a) - m(a)) * gen.fprime(m(a)) * J(k, a);
            }
            g(k) = acc;
        }
        return g;
    }

    Mat scoring_matrix(const Vec& m, const Mat& J) const {
        Vec w(m.size());
        for (int a = 0; a < m.size(); ++a) w(a) = gen.fprime(m(a));
        return J * w.asDiagonal() * J.transpose();
    }
};

struct SingleRun {
    Vec theta;
    double value = std::numeric_limits<double>::infinity();
    double gradient_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

double armijo_search(const Landscape& land, const Vec& theta, double fval, const Vec& direction,
                     double directional_deriv, const SolverOptions& opts, Vec& theta_out,
                     double& fval_out) {
    double t = 1.0;
    while (t > 1e-14) {
        const Vec candidate = theta + t * direction;
        const auto trial = land.value(candidate);
        if (trial && *trial <= fval + opts.armijo_c * t * directional_deriv) {
            theta_out = candidate;
            fval_out = *trial;
            return t;
        }
        t *= opts.backtrack;
    }
    return 0.0;
}

SingleRun solve_from(const Landscape& land, Vec theta, const SolverOptions& opts) {
    SingleRun run;
    auto fval_opt = land.value(theta);
    if (!fval_opt) {
        run.theta = theta;
        return run;
    }
    double fval = *fval_opt;

    Vec prev_theta;
    Vec prev_grad;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        run.iterations = iter;
        const Vec m = land.manifold.forward(theta).weights();
        const Mat J = land.manifold.jacobian(theta);
        const Vec grad = land.gradient(theta, m, J);
        const double gnorm = grad.norm();
        if (gnorm <= opts.tol_grad) {
            run.theta = theta;
            run.value = fval;
            run.gradient_norm = gnorm;
            run.converged = true;
            return run;
        }

        Vec direction;
        bool have_newton = false;
        if (opts.method == SolveMethod::auto_newton) {
            const Mat H = land.scoring_matrix(m, J);
            Eigen::LDLT<Mat> ldlt(H);
            if (ldlt.info() == Eigen::Success) {
                Vec p = ldlt.solve(-grad);
                if (p.allFinite() && grad.dot(p) < 0.0) {
                    direction = p;
                    have_newton = true;
                }
            }
        }
        if (!have_newton) {
            // Barzilai-Borwein step length on the steepest-descent direction.
            double step = 1.0 / std::max(1.0, gnorm);
            if (prev_theta.size() > 0) {
                const Vec s = theta - prev_theta;
                const Vec y = grad - prev_grad;
                const double sy = s.dot(y);
                if (sy > 0.0) step = s.squaredNorm() / sy;
            }
            direction = -step * grad;
        }

        prev_theta = theta;
        prev_grad = grad;

        Vec next_theta;
        double next_fval = 0.0;
        const double dd = grad.dot(direction);
        if (armijo_search(land, theta, fval, direction, dd, opts, next_theta, next_fval) == 0.0) {
            break; // no acceptable step in this direction
        }
        theta = next_theta;
        fval = next_fval;
    }

    run.theta = theta;
    run.value = fval;
    const Vec m = land.manifold.forward(theta).weights();
    run.gradient_norm = land.gradient(theta, m, land.manifold.jacobian(theta)).norm();
    run.converged = run.gradient_norm <= opts.tol_grad;
    return run;
}

Vec feasible_start(const Landscape& land, Vec candidate) {
    const Vec center = land.manifold.domain().center();
    for (int attempt = 0; attempt < 50; ++attempt) {
        if (land.value(candidate)) return candidate;
        candidate = 0.5 * (candidate + center);
    }
    return center;
}

} // namespace

ProjectionResult project(const Generator& gen, const ModelManifold& manifold,
                         const Distribution& x, const SolverOptions& opts) {
    if (x.size() != manifold.alphabet().size()) {
        throw ContractViolation("project: data point and manifold alphabets differ");
    }
    const Landscape land{gen, manifold, x.weights()};
    const ParamBox inner = manifold.domain().shrunk(0.05);
    const std::vector<Vec> starts = halton_points(opts.n_starts, inner.lo, inner.hi, opts.seed);

    std::vector<SingleRun> runs;
    runs.reserve(starts.size());
    for (const Vec& start : starts) {
        runs.push_back(solve_from(land, feasible_start(land, start), opts));
    }

    int best = -1;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!runs[i].converged) continue;
        if (best < 0 || runs[i].value < runs[best].value) best = static_cast<int>(i);
    }
    const bool any_converged = best >= 0;
    if (!any_converged) {
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (best < 0 || runs[i].value < runs[best].value) best = static_cast<int>(i);
        }
    }

    const SingleRun& winner = runs[best];
    ProjectionResult result{
        winner.theta,
        manifold.forward(winner.theta),
        0.0,
        winner.gradient_norm,
        winner.converged,
        false,
        winner.iterations,
    };
    result.divergence_at_min =
        bregman_divergence(gen, x, result.m_star);

    if (any_converged) {
        bool agree = true;
        for (const SingleRun& run : runs) {
            if (!run.converged ||
                (run.theta - winner.theta).lpNorm<Eigen::Infinity>() > opts.agreement_tol) {
                agree = false;
                break;
            }
        }
        result.multistart_agreement = agree;
        return result;
    }
    throw SolverError("project: no start reached stationarity within the iteration cap",
                      std::move(result));
}

Vec projection_gradient(const Generator& gen, const ModelManifold& manifold,
                        const Distribution& x, const Vec& theta) {
    const Landscape land{gen, manifold, x.weights()};
    const Vec m = manifold.forward(theta).weights();
    return land.gradient(theta, m, manifold.jacobian(theta));
}

double corrector(const Generator& gen, const Distribution& m) {
    double acc = 0.0;
    for (int a = 0; a < m.size(); ++a) {
        acc += -gen.F(m(a)) + m(a) * gen.f(m(a));
    }
    return acc;
}

double model_divergence(const Generator& gen, const ModelManifold& manifold, const Vec& theta,
                        const Vec& eta) {
    return bregman_divergence(gen, manifold.forward(theta), manifold.forward(eta));
}

} // namespace infogeo
