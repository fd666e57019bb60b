#include <doctest.h>

#include "support.hpp"

using namespace infogeo;
using testutil::question;
using testutil::vec;

TEST_CASE("alphabet requires at least two symbols") {
    CHECK_THROWS_AS(Alphabet(1), ContractViolation);
    CHECK_THROWS_AS(Alphabet(0), ContractViolation);
    CHECK(Alphabet(2).size() == 2);
    CHECK(Alphabet(2) == Alphabet(2));
}

TEST_CASE("distribution validates interior and normalization") {
    CHECK_NOTHROW(Distribution(vec({0.5, 0.5})));
    CHECK_THROWS_AS(Distribution(vec({0.5, 0.6})), DomainError);
    CHECK_THROWS_AS(Distribution(vec({1.0, 0.0})), DomainError);
    CHECK_THROWS_AS(Distribution(vec({1.0 + 1e-13, -1e-13})), DomainError);
    CHECK_THROWS_AS(Distribution(vec({0.5, 0.5 - 1e-11, 1e-13})), DomainError);
    CHECK_THROWS_AS(Distribution(vec({0.9})), ContractViolation);

    const Distribution x(vec({0.25, 0.75}));
    CHECK(x(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(x.size() == 2);
    CHECK(x.alphabet() == Alphabet(2));
}

TEST_CASE("question validates finite entries") {
    CHECK_THROWS_AS(Question(vec({1.0, std::nan("")})), DomainError);
    CHECK_THROWS_AS(Question(vec({7.0})), ContractViolation);
    const Question one = Question::constant_one(Alphabet(3));
    CHECK(one.values() == Vec::Ones(3));
}

TEST_CASE("evaluate computes the expectation pairing") {
    CHECK(evaluate(Distribution(vec({0.5, 0.5})), question({1, 1})) == doctest::Approx(1.0));
    CHECK(evaluate(Distribution(vec({0.25, 0.75})), question({4, 0})) == doctest::Approx(1.0));
    const Vec third = Vec::Constant(3, 1.0 / 3.0);
    CHECK(evaluate(Distribution(third), question({1, 0, -1})) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(evaluate(Distribution(vec({0.5, 0.5})), question({1, 0, -1})),
                    ContractViolation);
}

TEST_CASE("evaluate is bilinear in the question") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Distribution x = testutil::random_interior(4, rng);
        std::normal_distribution<double> normal(0.0, 1.0);
        Vec qa(4), qb(4);
        for (int a = 0; a < 4; ++a) {
            qa(a) = normal(rng);
            qb(a) = normal(rng);
        }
        const double alpha = 0.7, beta = -1.3;
        const double combined = evaluate(x, Question(alpha * qa + beta * qb));
        const double split = alpha * evaluate(x, Question(qa)) + beta * evaluate(x, Question(qb));
        CHECK(combined == doctest::Approx(split).epsilon(1e-13));
    }
}

TEST_CASE("param box is open and shrinkable") {
    const ParamBox box = ParamBox::cube(2, -1.0, 1.0);
    CHECK(box.contains(vec({0.0, 0.0})));
    CHECK_FALSE(box.contains(vec({1.0, 0.0})));
    CHECK_FALSE(box.contains(vec({0.0, -1.0})));
    CHECK_FALSE(box.contains(vec({0.0})));
    const ParamBox inner = box.shrunk(0.25);
    CHECK(inner.lo(0) == doctest::Approx(-0.5));
    CHECK(inner.hi(1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ParamBox(vec({0.0}), vec({0.0})), ContractViolation);
    CHECK_THROWS_AS(box.shrunk(0.5), ContractViolation);
}

TEST_CASE("exponential family forward map is the softmax of the affine statistic") {
    const ModelManifold bern =
        make_manifold(BuiltinManifoldSpec::exponential({question({1, 0})}));
    const Distribution uniform = bern.forward(vec({0.0}));
    CHECK(uniform(0) == doctest::Approx(0.5).epsilon(1e-15));

    const ModelManifold exp3 =
        make_manifold(BuiltinManifoldSpec::exponential({question({1, 0, -1})}));
    const Distribution m = exp3.forward(vec({std::log(2.0)}));
    CHECK(m(0) == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
    CHECK(m(1) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(m(2) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("curved polynomial family evaluates its weight polynomials") {
    const ModelManifold curved = make_manifold(BuiltinManifoldSpec::curved_polynomial());
    const Distribution m = curved.forward(vec({0.3}));
    CHECK(m(0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(m(1) == doctest::Approx(0.09).epsilon(1e-15));
    CHECK(m(2) == doctest::Approx(0.61).epsilon(1e-15));

    const ModelManifold bern = testutil::mean_bernoulli();
    const Distribution b = bern.forward(vec({0.3}));
    CHECK(b(0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(b(1) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("builtin forward maps stay normalized and interior across the domain") {
    for (const auto& config : testutil::builtin_configs()) {
        CAPTURE(config.label);
        const ModelManifold manifold = make_manifold(config.spec);
        for (const Vec& theta : testutil::domain_grid(manifold, 20)) {
            const Vec w = manifold.forward(theta).weights();
            CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
            CHECK(w.minCoeff() > 0.0);
        }
    }
}

TEST_CASE("analytic jacobians match central finite differences") {
    for (const auto& config : testutil::builtin_configs()) {
        CAPTURE(config.label);
        const ModelManifold manifold = make_manifold(config.spec);
        REQUIRE(manifold.has_analytic_jacobian());
        for (const Vec& theta : testutil::domain_grid(manifold, 20)) {
            const Mat J = manifold.jacobian(theta);
            const Mat Jfd = manifold.fd_jacobian(theta);
            const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
            CHECK((J - Jfd).cwiseAbs().maxCoeff() / scale <= 1e-6);
        }
    }
}

TEST_CASE("jacobian rows sum to zero") {
    for (const auto& config : testutil::builtin_configs()) {
        CAPTURE(config.label);
        const ModelManifold manifold = make_manifold(config.spec);
        for (const Vec& theta : testutil::domain_grid(manifold, 10)) {
            const Mat J = manifold.jacobian(theta);
            for (int k = 0; k < J.rows(); ++k) {
                CHECK(std::abs(J.row(k).sum()) <= 1e-8);
            }
        }
    }
}

TEST_CASE("degenerate questions are rejected") {
    CHECK_THROWS_AS(make_manifold(BuiltinManifoldSpec::exponential({question({2, 2, 2})})),
                    ContractViolation);
    // (3, 1, -1) = 2 * (1, 0, -1) + (1, 1, 1): dependent with the constant.
    CHECK_THROWS_AS(make_manifold(BuiltinManifoldSpec::exponential(
                        {question({1, 0, -1}), question({3, 1, -1})})),
                    ContractViolation);
    CHECK_THROWS_AS(make_manifold(BuiltinManifoldSpec::q_exponential({question({1, 1})}, 0.5)),
                    ContractViolation);
}

TEST_CASE("forward rejects parameters outside the domain") {
    const ModelManifold exp3 = make_manifold(
        BuiltinManifoldSpec::exponential({question({1, 0, -1})}, ParamBox::cube(1, -3, 3)));
    CHECK_THROWS_AS(exp3.forward(vec({3.5})), DomainError);
    CHECK_THROWS_AS(exp3.forward(vec({3.0})), DomainError);
    CHECK_NOTHROW(exp3.forward(vec({2.999})));
}

TEST_CASE("q-exponential default domains scale with the deformation") {
    const ModelManifold half =
        make_manifold(BuiltinManifoldSpec::q_exponential({question({1, 0, -1})}, 0.5));
    CHECK(half.domain().hi(0) == doctest::Approx(1.8).epsilon(1e-12));
    const ModelManifold two =
        make_manifold(BuiltinManifoldSpec::q_exponential({question({1, 0, -1})}, 2.0));
    CHECK(two.domain().hi(0) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("curved polynomial spec validates its shape") {
    CHECK_THROWS_AS(make_manifold(BuiltinManifoldSpec::curved_polynomial(
                        (Mat(2, 3) << 0, 1, 0, 0, 0, 1).finished(), 4,
                        ParamBox::cube(1, 0.02, 0.6))),
                    ContractViolation);
    CHECK_THROWS_AS(make_manifold(BuiltinManifoldSpec::curved_polynomial(
                        (Mat(1, 2) << 0, 1).finished(), 2, ParamBox::cube(2, 0.1, 0.9))),
                    ContractViolation);
}
