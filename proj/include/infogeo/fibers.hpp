#pragma once

#include "infogeo/projection.hpp"

#include <vector>

namespace infogeo {

// Affine candidate set for the fiber of m_theta: all x satisfying the
// stationarity conditions
//   sum_a [x(a) - m_theta(a)] d f(m_theta(a)) / d theta^k = 0
// together with sum_a x(a) = 1. Stationarity is necessary, not sufficient,
// for fiber membership; sample_fiber certifies points by re-projection.
struct FiberDescription {
    Vec theta;
    Distribution anchor;          // m_theta
    Mat basis;                    // n x dim, orthonormal columns
    Mat constraint_matrix;        // (d+1) x n: stationarity rows then ones
    int achieved_rank = 0;
    bool degenerate = false;      // achieved_rank < d+1

    int dim() const { return static_cast<int>(basis.cols()); }
};

struct FiberSample {
    std::vector<Distribution> points;
    std::vector<bool> verified;      // re-projection returned theta within tol
    std::vector<Vec> projected_theta;
    double radius = 0.0;             // radius actually used after auto-halving
    std::uint64_t seed = 0;

    int n_verified() const;
};

FiberDescription fiber_description(const Generator& gen, const ModelManifold& manifold,
                                   const Vec& theta);

// Draw points anchor + sum_i c_i v_i with coefficients uniform in the ball
// of the given radius. Points with any weight <= 10 * interior floor are
// rejected; if fewer than half the requested samples survive, the radius is
// halved (up to 6 times). Every kept point is re-projected with multistart
// and flagged verified when |theta_star - theta|_inf <= verify_tol.
FiberSample sample_fiber(const FiberDescription& desc, const Generator& gen,
                         const ModelManifold& manifold, int n_samples, double radius,
                         std::uint64_t seed, const SolverOptions& solver = {},
                         double verify_tol = 1e-6);

} // namespace infogeo
