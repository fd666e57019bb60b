#pragma once

#include "infogeo/core.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace infogeo {

// Axis-aligned open box in parameter space.
struct ParamBox {
    Vec lo;
    Vec hi;

    ParamBox(Vec lo_, Vec hi_);
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& theta) const;
    Vec center() const { return 0.5 * (lo + hi); }
    // Box with every side shrunk by fraction `margin` on each end.
    ParamBox shrunk(double margin) const;

    static ParamBox cube(int dim, double lo, double hi);
};

// Differentiable parametrized family theta -> m_theta inside the simplex.
// The jacobian is the d x n matrix with rows d m_theta(a) / d theta^k;
// when no analytic jacobian is supplied it falls back to central finite
// differences of the forward map.
class ModelManifold {
public:
    using ForwardFn = std::function<Vec(const Vec&)>;
    using JacobianFn = std::function<Mat(const Vec&)>;

    ModelManifold(Alphabet alphabet, int param_dim, ParamBox domain, ForwardFn forward,
                  JacobianFn analytic_jacobian = nullptr, std::string name = "custom");

    Distribution forward(const Vec& theta) const;
    Mat jacobian(const Vec& theta) const;
    // Finite-difference jacobian, regardless of whether an analytic one exists.
    Mat fd_jacobian(const Vec& theta) const;

    bool has_analytic_jacobian() const { return static_cast<bool>(analytic_); }
    Alphabet alphabet() const { return alphabet_; }
    int param_dim() const { return param_dim_; }
    const ParamBox& domain() const { return domain_; }
    const std::string& name() const { return name_; }

private:
    Alphabet alphabet_;
    int param_dim_;
    ParamBox domain_;
    ForwardFn forward_;
    JacobianFn analytic_;
    std::string name_;
};

// Declarative description of the shipped families.
//
//   exponential       m_theta(a) = exp(sum_k theta^k q_k(a)) / Z(theta)
//   q_exponential     m_theta(a) proportional to exp_q of the same affine
//                     expression, normalized by dividing by the sum
//   curved_polynomial d=1; the first n-1 weights are polynomials in theta
//                     (ascending-power coefficient rows), the last is
//                     1 minus their sum. Defaults to (theta, theta^2,
//                     1 - theta - theta^2).
struct BuiltinManifoldSpec {
    enum class Kind { exponential, q_exponential, curved_polynomial };

    Kind kind = Kind::exponential;
    std::vector<Question> questions;            // exponential kinds
    std::optional<double> q;                    // q_exponential deformation
    std::optional<Mat> coefficients;            // curved_polynomial rows
    std::optional<int> n;                       // alphabet size (curved)
    std::optional<ParamBox> domain;             // overrides the default box

    static BuiltinManifoldSpec exponential(std::vector<Question> qs,
                                           std::optional<ParamBox> domain = std::nullopt);
    static BuiltinManifoldSpec q_exponential(std::vector<Question> qs, double q,
                                             std::optional<ParamBox> domain = std::nullopt);
    static BuiltinManifoldSpec curved_polynomial();
    static BuiltinManifoldSpec curved_polynomial(Mat coefficients, int n, ParamBox domain);
};

// Build a manifold from a builtin spec. Rejects degenerate questions
// (constant, or linearly dependent together with the constant question).
ModelManifold make_manifold(const BuiltinManifoldSpec& spec);

} // namespace infogeo
