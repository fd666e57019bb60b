#pragma once

#include "infogeo/projection.hpp"

namespace infogeo {

enum class FisherSource { numeric_hessian, bregman_closed_form };

struct FisherMatrix {
    Vec at_theta;
    Mat matrix;                 // d x d, symmetric
    FisherSource source = FisherSource::numeric_hessian;

    Vec eigenvalues() const;    // ascending
};

struct FisherNumericOptions {
    double step_scale = 3e-4;   // h_k = step_scale * max(1, |theta_k|)
    double grad_tol = 1e-7;     // required stationarity at theta_star
    double asym_tol = 1e-6;     // raw asymmetry beyond this is an error
};

// Central finite-difference Hessian of theta -> D(x||theta) at theta_star,
// symmetrized. theta_star must be a verified minimum for x: the matrix of
// second derivatives carries its meaning only where m_theta is the
// projection of x, so a gradient above grad_tol is a contract violation.
FisherMatrix fisher_numeric(const Generator& gen, const ModelManifold& manifold,
                            const Distribution& x, const Vec& theta_star,
                            const FisherNumericOptions& opts = {});

// Closed form for Bregman divergences:
//   I_{k,l}(theta) = sum_a f'(m_theta(a)) dm/dtheta^k (a) dm/dtheta^l (a)
FisherMatrix fisher_bregman(const Generator& gen, const ModelManifold& manifold,
                            const Vec& theta);

// Diffeomorphism theta -> eta on a stated box with its d x d jacobian.
// An analytic inverse is optional; when absent, invert() solves the map
// with Newton iterations on the jacobian.
struct Reparametrization {
    std::function<Vec(const Vec&)> map;
    std::function<Mat(const Vec&)> jacobian;
    std::function<Vec(const Vec&)> inverse;   // may be null
    ParamBox box;
    std::string name;

    Vec invert(const Vec& eta, const Vec& guess) const;

    static Reparametrization identity(ParamBox box);
    // d=1, theta in (0,1): eta = ln(theta / (1 - theta)).
    static Reparametrization logit(ParamBox box);
    // eta = scale * theta componentwise.
    static Reparametrization scaling(ParamBox box, double scale);
    // d=2: eta = (theta_1, theta_2 + c theta_1^2), unit jacobian determinant.
    static Reparametrization quadratic2d(ParamBox box, double c);
};

// Covariance of the Fisher matrix under the coordinate change:
//   I_eta = J^{-T} I_theta J^{-1} with J = d eta / d theta at at_theta.
FisherMatrix covariance_transform(const FisherMatrix& I_theta, const Reparametrization& rep);

// The same manifold in eta coordinates: forward eta -> m_{theta(eta)} with
// jacobian J^{-T} * (d m / d theta). Used to evaluate Fisher matrices
// directly in transformed coordinates.
ModelManifold reparametrized_manifold(const ModelManifold& manifold, const Reparametrization& rep);

} // namespace infogeo
