#include "infogeo/expfam.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <sstream>

namespace infogeo {

ConstancyReport check_fiber_constancy(const Generator& gen, const ModelManifold& manifold,
                                      const Vec& theta, const ConstancyOptions& opts) {
    ConstancyReport report;
    report.theta = theta;
    report.threshold = opts.threshold;

    const FiberDescription desc = fiber_description(gen, manifold, theta);
    const Distribution& anchor = desc.anchor;
    report.reference = fisher_numeric(gen, manifold, anchor, theta, opts.fisher);
    const FisherMatrix closed = fisher_bregman(gen, manifold, theta);
    report.bregman_agreement =
        (report.reference.matrix - closed.matrix).norm() / closed.matrix.norm();

    if (desc.dim() == 0) {
        report.vacuous = true;
        report.constant = true;
        return report;
    }

    const FiberSample sample = sample_fiber(desc, gen, manifold, opts.n_samples, opts.radius,
                                            opts.seed, opts.solver);
    const double ref_norm = report.reference.matrix.norm();
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        if (!sample.verified[i]) continue;
        const FisherMatrix I = fisher_numeric(gen, manifold, sample.points[i],
                                              sample.projected_theta[i], opts.fisher);
        const double spread = (I.matrix - report.reference.matrix).norm() / ref_norm;
        report.max_relative_spread = std::max(report.max_relative_spread, spread);
        report.fisher_matrices.push_back(I);
        ++report.n_points;
    }
    if (report.n_points < 3) {
        std::ostringstream msg;
        msg << "check_fiber_constancy: only " << report.n_points
            << " verified fiber points; need at least 3";
        throw NumericError(msg.str());
    }
    report.constant = report.max_relative_spread <= opts.threshold;
    return report;
}

PythagoreanReport check_pythagorean(const Generator& gen, const ModelManifold& manifold,
                                    const Distribution& x, const Vec& theta, const Vec& eta,
                                    double membership_tol, const SolverOptions& solver) {
    const ProjectionResult res = project(gen, manifold, x, solver);
    if (!res.converged ||
        (res.theta_star - theta).lpNorm<Eigen::Infinity>() > membership_tol) {
        std::ostringstream msg;
        msg << "check_pythagorean: x projects to a parameter "
            << (res.theta_star - theta).lpNorm<Eigen::Infinity>()
            << " away from theta; the relation is stated only for fiber members";
        throw ContractViolation(msg.str());
    }

    PythagoreanReport report{x, theta, eta, 0.0, 0.0, 0.0, 0.0};
    report.d_x_theta = bregman_divergence(gen, x, manifold.forward(theta));
    report.d_theta_eta = model_divergence(gen, manifold, theta, eta);
    report.d_x_eta = bregman_divergence(gen, x, manifold.forward(eta));
    report.residual = report.d_x_theta + report.d_theta_eta - report.d_x_eta;
    return report;
}

AffineLogMapReport check_affine_logmap(const Generator& gen, const ModelManifold& manifold,
                                       const Mat& grid, double rank_tol) {
    const int d = manifold.param_dim();
    const int G = static_cast<int>(grid.rows());
    if (grid.cols() != d) {
        throw ContractViolation("check_affine_logmap: grid dimension differs from param_dim");
    }
    if (G < 2 * (d + 2)) {
        std::ostringstream msg;
        msg << "check_affine_logmap: grid of " << G << " points is too small; need at least "
            << 2 * (d + 2);
        throw ContractViolation(msg.str());
    }

    const int n = manifold.alphabet().size();
    Mat V(G, n);
    for (int i = 0; i < G; ++i) {
        const Vec m = manifold.forward(grid.row(i).transpose()).weights();
        for (int a = 0; a < n; ++a) V(i, a) = gen.f(m(a));
    }

    // Double-centering removes the theta-only and symbol-only additive parts,
    // so an affine map of dimension d leaves at most rank d behind.
    const Vec row_mean = V.rowwise().mean();
    const Vec col_mean = V.colwise().mean().transpose();
    const double grand = row_mean.mean();
    Mat centered = V;
    centered.colwise() -= row_mean;
    centered.rowwise() -= col_mean.transpose();
    centered.array() += grand;

    Eigen::JacobiSVD<Mat> svd(centered);
    const Vec sv = svd.singularValues();
    int rank = 0;
    if (sv.size() > 0 && sv(0) > 0.0) {
        for (int i = 0; i < sv.size(); ++i) {
            if (sv(i) > rank_tol * sv(0)) ++rank;
        }
    }

    AffineLogMapReport report;
    report.grid = grid;
    report.value_matrix = std::move(V);
    report.singular_values = sv;
    report.effective_rank = rank;
    report.rank_tol = rank_tol;
    report.affine = rank <= d;
    return report;
}

SecondDerivReport check_second_derivative_criterion(
    const Generator& gen, const ModelManifold& manifold, const Reparametrization& rep,
    const Vec& theta, const std::vector<std::pair<int, int>>& probe_pairs, double threshold) {
    const int d = manifold.param_dim();
    const int n = manifold.alphabet().size();
    const Vec eta0 = rep.map(theta);

    // Per-symbol value vector of eta -> f(m_{theta(eta)}(a)).
    auto values = [&](const Vec& eta) -> Vec {
        const Vec m = manifold.forward(rep.invert(eta, theta)).weights();
        Vec out(n);
        for (int a = 0; a < n; ++a) out(a) = gen.f(m(a));
        return out;
    };

    Vec h(d);
    for (int k = 0; k < d; ++k) h(k) = fd_step_second(eta0(k));

    std::vector<Mat> hessians(n, Mat::Zero(d, d));
    const Vec center = values(eta0);
    for (int k = 0; k < d; ++k) {
        Vec ep = eta0, em = eta0;
        ep(k) += h(k);
        em(k) -= h(k);
        const Vec vp = values(ep);
        const Vec vm = values(em);
        for (int a = 0; a < n; ++a) {
            hessians[a](k, k) = (vp(a) - 2.0 * center(a) + vm(a)) / (h(k) * h(k));
        }
        for (int l = k + 1; l < d; ++l) {
            Vec epp = eta0, epm = eta0, emp = eta0, emm = eta0;
            epp(k) += h(k); epp(l) += h(l);
            epm(k) += h(k); epm(l) -= h(l);
            emp(k) -= h(k); emp(l) += h(l);
            emm(k) -= h(k); emm(l) -= h(l);
            const Vec cross =
                (values(epp) - values(epm) - values(emp) + values(emm)) / (4.0 * h(k) * h(l));
            for (int a = 0; a < n; ++a) {
                hessians[a](k, l) = cross(a);
                hessians[a](l, k) = cross(a);
            }
        }
    }

    double scale = 0.0;
    for (const Mat& H : hessians) scale = std::max(scale, H.norm());
    if (scale == 0.0) scale = 1.0;

    std::vector<std::pair<int, int>> pairs = probe_pairs;
    if (pairs.empty()) {
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
        }
    }
    double deviation = 0.0;
    for (const auto& [a, b] : pairs) {
        if (a < 0 || b < 0 || a >= n || b >= n) {
            throw ContractViolation("check_second_derivative_criterion: probe pair out of range");
        }
        deviation = std::max(deviation, (hessians[a] - hessians[b]).norm() / scale);
    }

    SecondDerivReport report;
    report.theta = theta;
    report.eta0 = eta0;
    report.symbol_hessians = std::move(hessians);
    report.max_relative_deviation = deviation;
    report.threshold = threshold;
    report.independent = deviation <= threshold;
    return report;
}

} // namespace infogeo
