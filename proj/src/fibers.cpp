#include "infogeo/fibers.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace infogeo {

int FiberSample::n_verified() const {
    int count = 0;
    for (const bool flag : verified) count += flag ? 1 : 0;
    return count;
}

FiberDescription fiber_description(const Generator& gen, const ModelManifold& manifold,
                                   const Vec& theta) {
    const Distribution anchor = manifold.forward(theta);
    const Vec& m = anchor.weights();
    const Mat J = manifold.jacobian(theta);
    const int d = manifold.param_dim();
    const int n = anchor.size();

    Mat C(d + 1, n);
    for (int k = 0; k < d; ++k) {
        for (int a = 0; a < n; ++a) C(k, a) = gen.fprime(m(a)) * J(k, a);
    }
    C.row(d) = Vec::Ones(n).transpose();

    Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    const double tol = 1e-10 * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) ++rank;
    }

    Mat basis = svd.matrixV().rightCols(n - rank);
    // Deterministic sign: the largest-magnitude entry of each column points up.
    for (int j = 0; j < basis.cols(); ++j) {
        int arg = 0;
        basis.col(j).cwiseAbs().maxCoeff(&arg);
        if (basis(arg, j) < 0.0) basis.col(j) = -basis.col(j);
    }

    return FiberDescription{theta, anchor, std::move(basis), std::move(C), rank, rank < d + 1};
}

FiberSample sample_fiber(const FiberDescription& desc, const Generator& gen,
                         const ModelManifold& manifold, int n_samples, double radius,
                         std::uint64_t seed, const SolverOptions& solver, double verify_tol) {
    if (!(radius > 0.0) || n_samples < 1) {
        throw ContractViolation("sample_fiber: need radius > 0 and n_samples >= 1");
    }
    FiberSample sample;
    sample.seed = seed;

    const int dim = desc.dim();
    std::vector<Vec> kept_weights;

    if (dim == 0) {
        sample.radius = radius;
        kept_weights.push_back(desc.anchor.weights());
    } else {
        for (int attempt = 0; attempt <= 6; ++attempt) {
            const double r = radius / static_cast<double>(1 << attempt);
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> normal(0.0, 1.0);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            kept_weights.clear();
            for (int i = 0; i < n_samples; ++i) {
                Vec c(dim);
                for (int j = 0; j < dim; ++j) c(j) = normal(rng);
                const double norm = c.norm();
                const double scale =
                    (norm > 0.0) ? r * std::pow(unif(rng), 1.0 / dim) / norm : 0.0;
                c *= scale;
                Vec w = desc.anchor.weights() + desc.basis * c;
                if (w.minCoeff() <= 10.0 * kInteriorFloor) continue;
                w /= w.sum();
                kept_weights.push_back(std::move(w));
            }
            sample.radius = r;
            if (static_cast<int>(kept_weights.size()) * 2 >= n_samples) break;
        }
        if (kept_weights.empty()) {
            std::ostringstream msg;
            msg << "sample_fiber: no interior samples survived down to radius " << sample.radius;
            throw NumericError(msg.str());
        }
    }

    for (Vec& w : kept_weights) {
        Distribution point(std::move(w));
        bool ok = false;
        Vec theta_hat;
        try {
            const ProjectionResult res = project(gen, manifold, point, solver);
            theta_hat = res.theta_star;
            ok = res.converged &&
                 (res.theta_star - desc.theta).lpNorm<Eigen::Infinity>() <= verify_tol;
        } catch (const SolverError& err) {
            theta_hat = err.best.theta_star;
        }
        sample.points.push_back(std::move(point));
        sample.verified.push_back(ok);
        sample.projected_theta.push_back(std::move(theta_hat));
    }
    return sample;
}

CrosscheckOutcome model_divergence_crosschecked(const Generator& gen,
                                                const ModelManifold& manifold, const Vec& theta,
                                                const Vec& eta, const CrosscheckOptions& opts) {
    CrosscheckOutcome outcome;
    outcome.divergence = model_divergence(gen, manifold, theta, eta);

    const FiberDescription desc = fiber_description(gen, manifold, theta);
    const FiberSample sample = sample_fiber(desc, gen, manifold, opts.n_samples, opts.radius,
                                            opts.seed, opts.solver);
    const Distribution m_eta = manifold.forward(eta);

    double min_sampled = outcome.divergence;
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        if (!sample.verified[i]) continue;
        ++outcome.n_verified;
        min_sampled = std::min(min_sampled, bregman_divergence(gen, sample.points[i], m_eta));
    }
    outcome.min_sampled = min_sampled;
    if (min_sampled < outcome.divergence - opts.slack) {
        std::ostringstream msg;
        msg << "model_divergence_crosschecked: sampled fiber point beats the plug-in value by "
            << outcome.divergence - min_sampled;
        throw NumericError(msg.str());
    }
    return outcome;
}

} // namespace infogeo
