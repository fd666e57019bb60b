#pragma once

#include "infogeo/fibers.hpp"
#include "infogeo/fisher.hpp"

#include <utility>
#include <vector>

namespace infogeo {

// Fisher-matrix constancy along a sampled fiber. The criterion quantifies
// over the whole fiber; this check reports the spread over a finite
// verified sample within a radius, as a statistical proxy.
struct ConstancyReport {
    Vec theta;
    int n_points = 0;                       // verified points entering the spread
    std::vector<FisherMatrix> fisher_matrices;
    FisherMatrix reference;                 // at the anchor
    double max_relative_spread = 0.0;       // max ||I(x)-I(anchor)||_F / ||I(anchor)||_F
    double threshold = 0.0;
    bool constant = false;                  // verdict at the threshold
    bool vacuous = false;                   // fiber has no directions (n-1-d = 0)
    double bregman_agreement = 0.0;         // ||reference - closed form|| / ||closed form||
};

struct ConstancyOptions {
    int n_samples = 100;
    double radius = 0.05;
    std::uint64_t seed = kDefaultSeed;
    double threshold = 1e-5;
    SolverOptions solver;
    FisherNumericOptions fisher;
};

ConstancyReport check_fiber_constancy(const Generator& gen, const ModelManifold& manifold,
                                      const Vec& theta, const ConstancyOptions& opts = {});

// Residual of D(x||theta) + D(theta||eta) = D(x||eta) for a verified
// fiber point x of theta.
struct PythagoreanReport {
    Distribution x;
    Vec theta;
    Vec eta;
    double d_x_theta = 0.0;
    double d_theta_eta = 0.0;
    double d_x_eta = 0.0;
    double residual = 0.0;
};

PythagoreanReport check_pythagorean(const Generator& gen, const ModelManifold& manifold,
                                    const Distribution& x, const Vec& theta, const Vec& eta,
                                    double membership_tol = 1e-6,
                                    const SolverOptions& solver = {});

// Rank test for the affine structure of the logarithmic map. Builds
// V[i][a] = f(m_{theta_i}(a)) over a parameter grid, double-centers V
// (row means, column means, grand mean), and counts singular values above
// rank_tol * sigma_max. An affine map L m_theta = -alpha(theta) - q_0 -
// sum_k eta^k(theta) q_k leaves rank at most d after centering.
struct AffineLogMapReport {
    Mat grid;                // G x d parameter points
    Mat value_matrix;        // G x n
    Vec singular_values;     // descending, of the double-centered matrix
    int effective_rank = 0;
    double rank_tol = 0.0;
    bool affine = false;     // verdict: effective_rank <= d
};

AffineLogMapReport check_affine_logmap(const Generator& gen, const ModelManifold& manifold,
                                       const Mat& grid, double rank_tol = 1e-8);

// Per-symbol Hessians of eta -> f(m(a)) by central differences; the family
// is exponential-like in eta exactly when these do not depend on a.
struct SecondDerivReport {
    Vec theta;
    Vec eta0;
    std::vector<Mat> symbol_hessians;       // one d x d matrix per symbol
    double max_relative_deviation = 0.0;
    double threshold = 0.0;
    bool independent = false;               // verdict at the threshold
};

SecondDerivReport check_second_derivative_criterion(
    const Generator& gen, const ModelManifold& manifold, const Reparametrization& rep,
    const Vec& theta, const std::vector<std::pair<int, int>>& probe_pairs = {},
    double threshold = 1e-5);

} // namespace infogeo
