#include "infogeo/fisher.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace infogeo {

Vec FisherMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Mat> solver(matrix);
    return solver.eigenvalues();
}

FisherMatrix fisher_numeric(const Generator& gen, const ModelManifold& manifold,
                            const Distribution& x, const Vec& theta_star,
                            const FisherNumericOptions& opts) {
    const double gnorm = projection_gradient(gen, manifold, x, theta_star).norm();
    if (gnorm > opts.grad_tol) {
        std::ostringstream msg;
        msg << "fisher_numeric: gradient norm " << gnorm << " at the evaluation point exceeds "
            << opts.grad_tol << "; the matrix is defined only at a projection point";
        throw ContractViolation(msg.str());
    }

    const int d = manifold.param_dim();
    const Vec& xw = x.weights();
    auto D = [&](const Vec& theta) {
        return detail::bregman_raw(gen, xw, manifold.forward(theta).weights());
    };

    Vec h(d);
    for (int k = 0; k < d; ++k) h(k) = opts.step_scale * std::max(1.0, std::abs(theta_star(k)));

    Mat H(d, d);
    const double center = D(theta_star);
    for (int k = 0; k < d; ++k) {
        Vec tp = theta_star, tm = theta_star;
        tp(k) += h(k);
        tm(k) -= h(k);
        H(k, k) = (D(tp) - 2.0 * center + D(tm)) / (h(k) * h(k));
        for (int l = k + 1; l < d; ++l) {
            Vec tpp = theta_star, tpm = theta_star, tmp = theta_star, tmm = theta_star;
            tpp(k) += h(k); tpp(l) += h(l);
            tpm(k) += h(k); tpm(l) -= h(l);
            tmp(k) -= h(k); tmp(l) += h(l);
            tmm(k) -= h(k); tmm(l) -= h(l);
            const double cross = (D(tpp) - D(tpm) - D(tmp) + D(tmm)) / (4.0 * h(k) * h(l));
            H(k, l) = cross;
            H(l, k) = cross;
        }
    }

    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff() / scale;
    if (asym > opts.asym_tol) {
        std::ostringstream msg;
        msg << "fisher_numeric: Hessian asymmetry " << asym << " exceeds " << opts.asym_tol;
        throw NumericError(msg.str());
    }
    return FisherMatrix{theta_star, 0.5 * (H + H.transpose()), FisherSource::numeric_hessian};
}

FisherMatrix fisher_bregman(const Generator& gen, const ModelManifold& manifold,
                            const Vec& theta) {
    const Vec m = manifold.forward(theta).weights();
    const Mat J = manifold.jacobian(theta);
    Vec w(m.size());
    for (int a = 0; a < m.size(); ++a) w(a) = gen.fprime(m(a));
    Mat I = J * w.asDiagonal() * J.transpose();
    return FisherMatrix{theta, 0.5 * (I + I.transpose()), FisherSource::bregman_closed_form};
}

Vec Reparametrization::invert(const Vec& eta, const Vec& guess) const {
    if (inverse) return inverse(eta);
    Vec theta = guess;
    for (int iter = 0; iter < 100; ++iter) {
        const Vec residual = map(theta) - eta;
        if (residual.lpNorm<Eigen::Infinity>() <= 1e-14) return theta;
        const Mat J = jacobian(theta);
        Eigen::PartialPivLU<Mat> lu(J);
        if (std::abs(lu.determinant()) <= 1e-10) {
            throw NumericError("Reparametrization::invert: singular jacobian");
        }
        theta -= lu.solve(residual);
    }
    throw NumericError("Reparametrization::invert: Newton iteration did not converge");
}

Reparametrization Reparametrization::identity(ParamBox box) {
    return Reparametrization{
        [](const Vec& t) { return t; },
        [](const Vec& t) { return Mat(Mat::Identity(t.size(), t.size())); },
        [](const Vec& e) { return e; },
        std::move(box),
        "identity",
    };
}

Reparametrization Reparametrization::logit(ParamBox box) {
    if (box.dim() != 1) {
        throw ContractViolation("Reparametrization::logit: one-dimensional only");
    }
    return Reparametrization{
        [](const Vec& t) { return Vec(Vec::Constant(1, std::log(t(0) / (1.0 - t(0))))); },
        [](const Vec& t) { return Mat(Mat::Constant(1, 1, 1.0 / (t(0) * (1.0 - t(0))))); },
        [](const Vec& e) { return Vec(Vec::Constant(1, 1.0 / (1.0 + std::exp(-e(0))))); },
        std::move(box),
        "logit",
    };
}

Reparametrization Reparametrization::scaling(ParamBox box, double scale) {
    if (scale == 0.0) {
        throw ContractViolation("Reparametrization::scaling: scale must be nonzero");
    }
    const int d = box.dim();
    return Reparametrization{
        [scale](const Vec& t) { return Vec(scale * t); },
        [scale, d](const Vec&) { return Mat(scale * Mat::Identity(d, d)); },
        [scale](const Vec& e) { return Vec(e / scale); },
        std::move(box),
        "scaling",
    };
}

Reparametrization Reparametrization::quadratic2d(ParamBox box, double c) {
    if (box.dim() != 2) {
        throw ContractViolation("Reparametrization::quadratic2d: two-dimensional only");
    }
    return Reparametrization{
        [c](const Vec& t) {
            Vec e(2);
            e << t(0), t(1) + c * t(0) * t(0);
            return e;
        },
        [c](const Vec& t) {
            Mat J(2, 2);
            J << 1.0, 0.0, 2.0 * c * t(0), 1.0;
            return J;
        },
        [c](const Vec& e) {
            Vec t(2);
            t << e(0), e(1) - c * e(0) * e(0);
            return t;
        },
        std::move(box),
        "quadratic2d",
    };
}

FisherMatrix covariance_transform(const FisherMatrix& I_theta, const Reparametrization& rep) {
    const Mat J = rep.jacobian(I_theta.at_theta);
    Eigen::PartialPivLU<Mat> lu(J);
    if (std::abs(lu.determinant()) <= 1e-10) {
        throw NumericError("covariance_transform: singular reparametrization jacobian");
    }
    const Mat Jinv = lu.inverse();
    Mat I = Jinv.transpose() * I_theta.matrix * Jinv;
    return FisherMatrix{rep.map(I_theta.at_theta), 0.5 * (I + I.transpose()), I_theta.source};
}

ModelManifold reparametrized_manifold(const ModelManifold& manifold,
                                      const Reparametrization& rep) {
    if (rep.box.dim() != manifold.param_dim()) {
        throw ContractViolation("reparametrized_manifold: dimension mismatch");
    }
    const Vec guess = manifold.domain().center();

    // Conservative eta-box: bounding box of the mapped theta-box sampled at
    // low-discrepancy points plus the corners. forward() still validates the
    // true domain through the inverse map, so the box is only a pre-filter.
    const ParamBox& tb = rep.box;
    const int d = tb.dim();
    Vec lo = Vec::Constant(d, std::numeric_limits<double>::infinity());
    Vec hi = Vec::Constant(d, -std::numeric_limits<double>::infinity());
    auto absorb = [&](const Vec& theta) {
        const Vec eta = rep.map(theta);
        lo = lo.cwiseMin(eta);
        hi = hi.cwiseMax(eta);
    };
    for (const Vec& p : halton_points(256, tb.lo, tb.hi, 1)) absorb(p);
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec corner(d);
        for (int k = 0; k < d; ++k) corner(k) = (mask >> k & 1) ? tb.hi(k) : tb.lo(k);
        const Vec inward = corner + 1e-9 * (tb.center() - corner);
        absorb(inward);
    }
    const Vec pad = 1e-9 * (hi - lo).cwiseMax(1.0);
    ParamBox eta_box(lo - pad, hi + pad);

    auto to_theta = [rep, guess](const Vec& eta) { return rep.invert(eta, guess); };
    auto forward = [base = manifold, to_theta](const Vec& eta) {
        return base.forward(to_theta(eta)).weights();
    };
    auto jac = [base = manifold, rep, to_theta](const Vec& eta) {
        const Vec theta = to_theta(eta);
        const Mat J_rep = rep.jacobian(theta);
        Eigen::PartialPivLU<Mat> lu(J_rep);
        if (std::abs(lu.determinant()) <= 1e-10) {
            throw NumericError("reparametrized_manifold: singular reparametrization jacobian");
        }
        return Mat(lu.inverse().transpose() * base.jacobian(theta));
    };
    return ModelManifold(manifold.alphabet(), manifold.param_dim(), std::move(eta_box), forward,
                         jac, manifold.name() + "@" + rep.name);
}

} // namespace infogeo
