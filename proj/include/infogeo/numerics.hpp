#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace infogeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Adaptive Simpson quadrature of fn over [a, b].
// Absolute tolerance abs_tol, at most max_intervals subdivisions; throws
// NumericError when the budget is exhausted before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double abs_tol = 1e-10, int max_intervals = 10000);

// First i points of the d-dimensional Halton sequence mapped into [lo, hi]
// boxes, with a Cranley-Patterson rotation derived from seed so distinct
// seeds give distinct but equally well-spread point sets.
std::vector<Vec> halton_points(int count, const Vec& lo, const Vec& hi, std::uint64_t seed);

// Central-difference step for first derivatives: 1e-6 * max(1, |t|).
inline double fd_step_first(double t) {
    return 1e-6 * std::max(1.0, std::abs(t));
}

// Central-difference step for second derivatives: 3e-4 * max(1, |t|).
inline double fd_step_second(double t) {
    return 3e-4 * std::max(1.0, std::abs(t));
}

} // namespace infogeo
