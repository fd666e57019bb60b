#include <doctest.h>

#include "support.hpp"

using namespace infogeo;
using testutil::question;
using testutil::vec;

namespace {

ModelManifold kl_exp3() {
    return make_manifold(
        BuiltinManifoldSpec::exponential({question({1, 0, -1})}, ParamBox::cube(1, -3, 3)));
}

Mat grid_matrix(const ModelManifold& manifold, int count, std::uint64_t seed = 7) {
    const std::vector<Vec> points = testutil::domain_grid(manifold, count, seed);
    Mat grid(count, manifold.param_dim());
    for (int i = 0; i < count; ++i) grid.row(i) = points[i].transpose();
    return grid;
}

} // namespace

TEST_CASE("information spread along an exponential-family fiber is flat") {
    ConstancyOptions opts;
    opts.n_samples = 30;
    const ConstancyReport report =
        check_fiber_constancy(Generator::kl(), kl_exp3(), vec({0.4}), opts);

    CHECK(report.constant);
    CHECK_FALSE(report.vacuous);
    CHECK(report.n_points >= 25);
    CHECK(static_cast<int>(report.fisher_matrices.size()) == report.n_points);
    CHECK(report.max_relative_spread <= 1e-5);
    CHECK(report.threshold == 1e-5);
    // At theta = 0.4 the information is the variance of the spanning question.
    CHECK(std::abs(report.reference.matrix(0, 0) - 0.6162662789458806) <= 1e-6);
    CHECK(report.bregman_agreement <= 1e-4);
}

TEST_CASE("information spread along a curved-family fiber is visible") {
    ConstancyOptions opts;
    opts.n_samples = 30;
    const ConstancyReport report = check_fiber_constancy(
        Generator::kl(), make_manifold(BuiltinManifoldSpec::curved_polynomial()), vec({0.3}),
        opts);

    CHECK_FALSE(report.constant);
    CHECK(report.max_relative_spread > 1e-3);
    CHECK(report.max_relative_spread <= 0.03);
    CHECK(report.reference.matrix(0, 0) ==
          doctest::Approx(11.530054644808743).epsilon(1e-4));
}

TEST_CASE("a zero-dimensional fiber makes the constancy check vacuous") {
    const ModelManifold exp2 = make_manifold(
        BuiltinManifoldSpec::exponential({question({1, 0})}, ParamBox::cube(1, -3, 3)));
    const ConstancyReport report =
        check_fiber_constancy(Generator::kl(), exp2, vec({0.3}));
    CHECK(report.vacuous);
    CHECK(report.constant);
    CHECK(report.n_points == 0);
}

TEST_CASE("matched deformed generator keeps the q-family fiber constant") {
    ConstancyOptions opts;
    opts.n_samples = 20;
    const Generator gen = generator_from_deformed_log(DeformedLog::power(0.5));
    const ModelManifold manifold =
        make_manifold(BuiltinManifoldSpec::q_exponential({question({1, 0, -1})}, 0.5));
    const ConstancyReport report = check_fiber_constancy(gen, manifold, vec({0.7}), opts);
    CHECK(report.constant);
    CHECK(report.max_relative_spread <= 1e-5);
}

TEST_CASE("three-point relation holds on the exponential family") {
    const ModelManifold manifold = kl_exp3();
    const Vec theta = vec({0.2});
    const Vec eta = vec({-0.7});

    SUBCASE("anchor as the fiber member") {
        const PythagoreanReport report =
            check_pythagorean(Generator::kl(), manifold, manifold.forward(theta), theta, eta);
        CHECK(std::abs(report.residual) <= 1e-12);
        CHECK(report.d_x_theta <= 1e-12);
    }

    SUBCASE("sampled fiber members") {
        const FiberDescription desc = fiber_description(Generator::kl(), manifold, theta);
        const FiberSample sample = sample_fiber(desc, Generator::kl(), manifold, 10, 0.05, 4);
        int checked = 0;
        for (std::size_t i = 0; i < sample.points.size(); ++i) {
            if (!sample.verified[i]) continue;
            const PythagoreanReport report =
                check_pythagorean(Generator::kl(), manifold, sample.points[i], theta, eta);
            CHECK(std::abs(report.residual) <= 1e-8);
            CHECK(report.residual ==
                  doctest::Approx(report.d_x_theta + report.d_theta_eta - report.d_x_eta)
                      .epsilon(1e-15));
            ++checked;
        }
        CHECK(checked >= 5);
    }
}

TEST_CASE("three-point relation fails off the exponential structure") {
    const ModelManifold curved = make_manifold(BuiltinManifoldSpec::curved_polynomial());
    const Distribution x(
        vec({0.33223436713385646, 0.06933208224946849, 0.598433550616675}));
    const PythagoreanReport report =
        check_pythagorean(Generator::kl(), curved, x, vec({0.3}), vec({0.5}));
    CHECK(report.residual == doctest::Approx(0.005667986915782908).epsilon(1e-9));
    CHECK(std::abs(report.residual) > 1e-4);
}

TEST_CASE("three-point relation rejects a non-member") {
    const ModelManifold curved = make_manifold(BuiltinManifoldSpec::curved_polynomial());
    const Distribution x = curved.forward(vec({0.5}));
    CHECK_THROWS_AS(check_pythagorean(Generator::kl(), curved, x, vec({0.3}), vec({0.5})),
                    ContractViolation);
}

TEST_CASE("logarithmic map is affine exactly on matched families") {
    const ModelManifold exp3 = kl_exp3();
    const AffineLogMapReport flat =
        check_affine_logmap(Generator::kl(), exp3, grid_matrix(exp3, 12));
    CHECK(flat.affine);
    CHECK(flat.effective_rank == 1);

    const ModelManifold curved = make_manifold(BuiltinManifoldSpec::curved_polynomial());
    const AffineLogMapReport bent =
        check_affine_logmap(Generator::kl(), curved, grid_matrix(curved, 12));
    CHECK_FALSE(bent.affine);
    CHECK(bent.effective_rank >= 2);

    const ModelManifold qexp =
        make_manifold(BuiltinManifoldSpec::q_exponential({question({1, 0, -1})}, 0.5));
    const Generator qgen = generator_from_deformed_log(DeformedLog::power(0.5));
    const AffineLogMapReport matched =
        check_affine_logmap(qgen, qexp, grid_matrix(qexp, 12));
    CHECK(matched.affine);
    CHECK(matched.effective_rank == 1);

    // The same family read through the wrong logarithm is no longer affine.
    const AffineLogMapReport mismatched =
        check_affine_logmap(Generator::kl(), qexp, grid_matrix(qexp, 12));
    CHECK_FALSE(mismatched.affine);
}

TEST_CASE("affine verdict survives a linear reparametrization") {
    const ModelManifold exp3 = kl_exp3();
    const ModelManifold scaled =
        reparametrized_manifold(exp3, Reparametrization::scaling(exp3.domain(), 2.0));
    const AffineLogMapReport report =
        check_affine_logmap(Generator::kl(), scaled, grid_matrix(scaled, 12));
    CHECK(report.affine);
    CHECK(report.effective_rank == 1);
}

TEST_CASE("affine check demands enough grid points") {
    const ModelManifold exp3 = kl_exp3();
    CHECK_THROWS_AS(check_affine_logmap(Generator::kl(), exp3, grid_matrix(exp3, 5)),
                    ContractViolation);
    CHECK_THROWS_AS(check_affine_logmap(Generator::kl(), exp3, Mat::Zero(12, 2)),
                    ContractViolation);
}

TEST_CASE("second-derivative criterion separates coordinate systems") {
    const ModelManifold mean = testutil::mean_bernoulli();
    const Generator kl = Generator::kl();

    const SecondDerivReport natural = check_second_derivative_criterion(
        kl, mean, Reparametrization::logit(mean.domain()), vec({0.3}));
    CHECK(natural.independent);
    CHECK(natural.max_relative_deviation <= 1e-5);

    const SecondDerivReport raw = check_second_derivative_criterion(
        kl, mean, Reparametrization::identity(mean.domain()), vec({0.3}));
    CHECK_FALSE(raw.independent);
    // d^2/dtheta^2 of ln(theta) and ln(1 - theta) at 0.3: -1/0.09 vs -1/0.49.
    const double expected = (1.0 / 0.09 - 1.0 / 0.49) / (1.0 / 0.09);
    CHECK(raw.max_relative_deviation == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("second-derivative criterion on the natural exponential family") {
    const ModelManifold exp3 = kl_exp3();
    const SecondDerivReport report = check_second_derivative_criterion(
        Generator::kl(), exp3, Reparametrization::identity(exp3.domain()), vec({0.4}));
    CHECK(report.independent);
    CHECK(static_cast<int>(report.symbol_hessians.size()) == 3);

    const ModelManifold curved = make_manifold(BuiltinManifoldSpec::curved_polynomial());
    const SecondDerivReport bent = check_second_derivative_criterion(
        Generator::kl(), curved, Reparametrization::identity(curved.domain()), vec({0.3}));
    CHECK_FALSE(bent.independent);
    CHECK(bent.max_relative_deviation > 1e-3);
}

TEST_CASE("second-derivative probe pairs are validated") {
    const ModelManifold exp3 = kl_exp3();
    const Reparametrization id = Reparametrization::identity(exp3.domain());
    const SecondDerivReport same = check_second_derivative_criterion(
        Generator::kl(), exp3, id, vec({0.4}), {{0, 0}});
    CHECK(same.max_relative_deviation == 0.0);
    CHECK_THROWS_AS(
        check_second_derivative_criterion(Generator::kl(), exp3, id, vec({0.4}), {{0, 5}}),
        ContractViolation);
}
