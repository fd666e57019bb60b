#include "infogeo/manifold.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace infogeo {

ParamBox::ParamBox(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size() || lo.size() == 0) {
        throw ContractViolation("ParamBox: lo and hi must share a nonzero dimension");
    }
    for (int k = 0; k < lo.size(); ++k) {
        if (!(lo(k) < hi(k))) {
            throw ContractViolation("ParamBox: lo must be strictly below hi in every coordinate");
        }
    }
}

bool ParamBox::contains(const Vec& theta) const {
    if (theta.size() != lo.size()) return false;
    for (int k = 0; k < lo.size(); ++k) {
        if (!(theta(k) > lo(k) && theta(k) < hi(k))) return false;
    }
    return true;
}

ParamBox ParamBox::shrunk(double margin) const {
    if (margin < 0.0 || margin >= 0.5) {
        throw ContractViolation("ParamBox::shrunk: margin must lie in [0, 0.5)");
    }
    const Vec span = hi - lo;
    return ParamBox(lo + margin * span, hi - margin * span);
}

ParamBox ParamBox::cube(int dim, double lo, double hi) {
    return ParamBox(Vec::Constant(dim, lo), Vec::Constant(dim, hi));
}

ModelManifold::ModelManifold(Alphabet alphabet, int param_dim, ParamBox domain, ForwardFn forward,
                             JacobianFn analytic_jacobian, std::string name)
    : alphabet_(alphabet),
      param_dim_(param_dim),
      domain_(std::move(domain)),
      forward_(std::move(forward)),
      analytic_(std::move(analytic_jacobian)),
      name_(std::move(name)) {
    if (param_dim_ < 1 || param_dim_ > alphabet_.size() - 1) {
        throw ContractViolation("ModelManifold: need 1 <= param_dim <= n - 1");
    }
    if (domain_.dim() != param_dim_) {
        throw ContractViolation("ModelManifold: domain dimension differs from param_dim");
    }
    if (!forward_) {
        throw ContractViolation("ModelManifold: forward map is required");
    }
}

Distribution ModelManifold::forward(const Vec& theta) const {
    if (!domain_.contains(theta)) {
        throw DomainError("ModelManifold: parameter outside the declared domain");
    }
    Vec w = forward_(theta);
    if (w.size() != alphabet_.size()) {
        throw ContractViolation("ModelManifold: forward map returned the wrong alphabet size");
    }
    return Distribution(std::move(w));
}

Mat ModelManifold::jacobian(const Vec& theta) const {
    if (analytic_) {
        Mat J = analytic_(theta);
        if (J.rows() != param_dim_ || J.cols() != alphabet_.size()) {
            throw ContractViolation("ModelManifold: analytic jacobian has the wrong shape");
        }
        return J;
    }
    return fd_jacobian(theta);
}

Mat ModelManifold::fd_jacobian(const Vec& theta) const {
    Mat J(param_dim_, alphabet_.size());
    for (int k = 0; k < param_dim_; ++k) {
        const double h = fd_step_first(theta(k));
        Vec tp = theta;
        Vec tm = theta;
        tp(k) += h;
        tm(k) -= h;
        J.row(k) = ((forward_(tp) - forward_(tm)) / (2.0 * h)).transpose();
    }
    return J;
}

namespace {

// exp_q(u) = (1 + (1-q) u)^{1/(1-q)}, the inverse of the q-logarithm.
double deformed_exp(double u, double q) {
    if (q == 1.0) return std::exp(u);
    const double t = (1.0 - q) * u;
    if (t <= -1.0) {
        throw DomainError("q_exponential: affine statistic outside the deformed-exp domain");
    }
    return std::exp(std::log1p(t) / (1.0 - q));
}

Mat questions_as_rows(const std::vector<Question>& qs) {
    const int n = qs.front().size();
    Mat Q(static_cast<int>(qs.size()), n);
    for (std::size_t k = 0; k < qs.size(); ++k) {
        if (qs[k].size() != n) {
            throw ContractViolation("make_manifold: questions live on different alphabets");
        }
        Q.row(static_cast<int>(k)) = qs[k].values().transpose();
    }
    return Q;
}

void reject_degenerate_questions(const Mat& Q) {
    const int n = static_cast<int>(Q.cols());
    Mat with_ones(Q.rows() + 1, n);
    with_ones.row(0) = Vec::Ones(n).transpose();
    with_ones.bottomRows(Q.rows()) = Q;
    Eigen::JacobiSVD<Mat> svd(with_ones);
    const Vec sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0)) {
        throw ContractViolation(
            "make_manifold: questions are affinely dependent with the constant question");
    }
}

ParamBox default_q_exponential_box(const Mat& Q, double q) {
    // Keep 1 + (1-q) * sum_k theta^k q_k(a) bounded away from zero across
    // the whole box: |u| <= B * sum_k max_a |q_k(a)| must stay below
    // 1/|1-q|, with a 0.9 safety factor and an overall cap of 10.
    const double limit = (q == 1.0) ? 10.0 : 1.0 / std::abs(1.0 - q);
    const double qsum = Q.cwiseAbs().rowwise().maxCoeff().sum();
    const double side = std::min(10.0, 0.9 * limit / qsum);
    return ParamBox::cube(static_cast<int>(Q.rows()), -side, side);
}

double polyval(const Vec& coeffs, double t) {
    double acc = 0.0;
    for (int j = static_cast<int>(coeffs.size()) - 1; j >= 0; --j) {
        acc = acc * t + coeffs(j);
    }
    return acc;
}

double polyval_derivative(const Vec& coeffs, double t) {
    double acc = 0.0;
    for (int j = static_cast<int>(coeffs.size()) - 1; j >= 1; --j) {
        acc = acc * t + coeffs(j) * j;
    }
    return acc;
}

ModelManifold make_exponential(const BuiltinManifoldSpec& spec) {
    const Mat Q = questions_as_rows(spec.questions);
    reject_degenerate_questions(Q);
    const int d = static_cast<int>(Q.rows());
    const int n = static_cast<int>(Q.cols());
    ParamBox box = spec.domain.value_or(ParamBox::cube(d, -10.0, 10.0));

    auto forward = [Q](const Vec& theta) -> Vec {
        Vec u = Q.transpose() * theta;
        const double shift = u.maxCoeff();
        Vec w = (u.array() - shift).exp();
        return w / w.sum();
    };
    auto jac = [Q, forward, d, n](const Vec& theta) -> Mat {
        const Vec m = forward(theta);
        Mat J(d, n);
        for (int k = 0; k < d; ++k) {
            const double mean = m.dot(Q.row(k).transpose());
            J.row(k) = (m.array() * (Q.row(k).transpose().array() - mean)).transpose();
        }
        return J;
    };
    return ModelManifold(Alphabet(n), d, std::move(box), forward, jac, "exponential");
}

ModelManifold make_q_exponential(const BuiltinManifoldSpec& spec) {
    const Mat Q = questions_as_rows(spec.questions);
    reject_degenerate_questions(Q);
    const double q = spec.q.value_or(1.0);
    const int d = static_cast<int>(Q.rows());
    const int n = static_cast<int>(Q.cols());
    ParamBox box = spec.domain.value_or(default_q_exponential_box(Q, q));

    auto forward = [Q, q, n](const Vec& theta) -> Vec {
        const Vec u = Q.transpose() * theta;
        Vec w(n);
        for (int a = 0; a < n; ++a) w(a) = deformed_exp(u(a), q);
        return w / w.sum();
    };
    auto jac = [Q, q, d, n](const Vec& theta) -> Mat {
        const Vec u = Q.transpose() * theta;
        Vec w(n);
        for (int a = 0; a < n; ++a) w(a) = deformed_exp(u(a), q);
        const double s = w.sum();
        // dw(a)/dtheta^k = w(a)^q q_k(a); normalize m = w / s.
        Vec wq(n);
        for (int a = 0; a < n; ++a) wq(a) = std::pow(w(a), q);
        Mat J(d, n);
        for (int k = 0; k < d; ++k) {
            const Vec dw = wq.array() * Q.row(k).transpose().array();
            J.row(k) = ((dw.array() - (w.array() / s) * dw.sum()) / s).transpose();
        }
        return J;
    };
    std::ostringstream name;
    name << "q_exponential(q=" << q << ")";
    return ModelManifold(Alphabet(n), d, std::move(box), forward, jac, name.str());
}

ModelManifold make_curved_polynomial(const BuiltinManifoldSpec& spec) {
    const Mat C = spec.coefficients.value_or((Mat(2, 3) << 0, 1, 0, 0, 0, 1).finished());
    const int n = spec.n.value_or(static_cast<int>(C.rows()) + 1);
    if (n != C.rows() + 1) {
        throw ContractViolation("curved_polynomial: need one coefficient row per free weight");
    }
    ParamBox box = spec.domain.value_or(ParamBox::cube(1, 0.02, 0.6));
    if (box.dim() != 1) {
        throw ContractViolation("curved_polynomial: the parameter is one-dimensional");
    }

    auto forward = [C, n](const Vec& theta) -> Vec {
        Vec w(n);
        double acc = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            w(i) = polyval(C.row(i).transpose(), theta(0));
            acc += w(i);
        }
        w(n - 1) = 1.0 - acc;
        return w;
    };
    auto jac = [C, n](const Vec& theta) -> Mat {
        Mat J(1, n);
        double acc = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            J(0, i) = polyval_derivative(C.row(i).transpose(), theta(0));
            acc += J(0, i);
        }
        J(0, n - 1) = -acc;
        return J;
    };
    return ModelManifold(Alphabet(n), 1, std::move(box), forward, jac, "curved_polynomial");
}

} // namespace

BuiltinManifoldSpec BuiltinManifoldSpec::exponential(std::vector<Question> qs,
                                                     std::optional<ParamBox> domain) {
    BuiltinManifoldSpec spec;
    spec.kind = Kind::exponential;
    spec.questions = std::move(qs);
    spec.domain = std::move(domain);
    return spec;
}

BuiltinManifoldSpec BuiltinManifoldSpec::q_exponential(std::vector<Question> qs, double q,
                                                       std::optional<ParamBox> domain) {
    BuiltinManifoldSpec spec;
    spec.kind = Kind::q_exponential;
    spec.questions = std::move(qs);
    spec.q = q;
    spec.domain = std::move(domain);
    return spec;
}

BuiltinManifoldSpec BuiltinManifoldSpec::curved_polynomial() {
    BuiltinManifoldSpec spec;
    spec.kind = Kind::curved_polynomial;
    return spec;
}

BuiltinManifoldSpec BuiltinManifoldSpec::curved_polynomial(Mat coefficients, int n, ParamBox domain) {
    BuiltinManifoldSpec spec;
    spec.kind = Kind::curved_polynomial;
    spec.coefficients = std::move(coefficients);
    spec.n = n;
    spec.domain = std::move(domain);
    return spec;
}

ModelManifold make_manifold(const BuiltinManifoldSpec& spec) {
    switch (spec.kind) {
        case BuiltinManifoldSpec::Kind::exponential:
            if (spec.questions.empty()) {
                throw ContractViolation("make_manifold: exponential kind needs questions");
            }
            return make_exponential(spec);
        case BuiltinManifoldSpec::Kind::q_exponential:
            if (spec.questions.empty()) {
                throw ContractViolation("make_manifold: q_exponential kind needs questions");
            }
            return make_q_exponential(spec);
        case BuiltinManifoldSpec::Kind::curved_polynomial:
            return make_curved_polynomial(spec);
    }
    throw ContractViolation("make_manifold: unknown kind");
}

} // namespace infogeo
