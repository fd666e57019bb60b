#include <doctest.h>

#include "support.hpp"

using namespace infogeo;
using testutil::question;
using testutil::vec;

namespace {

ModelManifold kl_exp3(double half_width = 3.0) {
    return make_manifold(BuiltinManifoldSpec::exponential(
        {question({1, 0, -1})}, ParamBox::cube(1, -half_width, half_width)));
}

} // namespace

TEST_CASE("a saturated family has a zero-dimensional fiber") {
    const ModelManifold exp2 = make_manifold(
        BuiltinManifoldSpec::exponential({question({1, 0})}, ParamBox::cube(1, -3, 3)));
    const FiberDescription desc = fiber_description(Generator::kl(), exp2, vec({0.3}));
    CHECK(desc.dim() == 0);
    CHECK(desc.achieved_rank == 2);
    CHECK_FALSE(desc.degenerate);

    const FiberSample sample = sample_fiber(desc, Generator::kl(), exp2, 10, 0.05, 1);
    REQUIRE(sample.points.size() == 1);
    CHECK(sample.verified[0]);
    CHECK(sample.points[0].weights() == desc.anchor.weights());
    CHECK(sample.radius == 0.05);
}

TEST_CASE("fiber direction of the width-one exponential family") {
    const ModelManifold manifold = kl_exp3();
    const Vec pinned =
        vec({-0.40824829046386296, 0.8164965809277259, -0.40824829046386313});

    for (double t : {std::log(2.0), 0.0, -1.2}) {
        const FiberDescription desc = fiber_description(Generator::kl(), manifold, vec({t}));
        REQUIRE(desc.dim() == 1);
        CHECK((desc.basis.col(0) - pinned).cwiseAbs().maxCoeff() <= 1e-12);
    }

    const FiberDescription euclid =
        fiber_description(Generator::euclidean(), manifold, vec({std::log(2.0)}));
    const Vec pinned_euclid =
        vec({-0.11664236870396094, 0.7581753965757456, -0.6415330278717847});
    CHECK((euclid.basis.col(0) - pinned_euclid).cwiseAbs().maxCoeff() <= 1e-12);

    // The two candidate sets genuinely differ: the directions are not aligned.
    const double cosine = std::abs(pinned.dot(pinned_euclid));
    CHECK(cosine == doctest::Approx(13.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("fiber basis is orthonormal and annihilated by the constraints") {
    for (const auto& config : testutil::builtin_configs()) {
        CAPTURE(config.label);
        const ModelManifold manifold = make_manifold(config.spec);
        for (const Vec& theta : testutil::domain_grid(manifold, 4)) {
            const FiberDescription desc = fiber_description(config.gen, manifold, theta);
            if (desc.dim() == 0) {
                CHECK(desc.basis.cols() == 0);
                continue;
            }
            const Mat gram = desc.basis.transpose() * desc.basis;
            CHECK((gram - Mat::Identity(desc.dim(), desc.dim())).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((desc.constraint_matrix * desc.basis).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("sampled fiber points satisfy the stationarity constraints") {
    const ModelManifold manifold = kl_exp3();
    const Vec theta = vec({0.4});
    const FiberDescription desc = fiber_description(Generator::kl(), manifold, theta);
    const FiberSample sample = sample_fiber(desc, Generator::kl(), manifold, 100, 0.05, 9);

    CHECK(sample.n_verified() >= 95);
    const Question q = question({1, 0, -1});
    const double anchor_moment = evaluate(desc.anchor, q);
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        const Vec& w = sample.points[i].weights();
        CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
        const Vec drift = desc.constraint_matrix * (w - desc.anchor.weights());
        CHECK(drift.cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(std::abs(evaluate(sample.points[i], q) - anchor_moment) <= 1e-10);
        if (sample.verified[i]) {
            CHECK((sample.projected_theta[i] - theta).cwiseAbs().maxCoeff() <= 1e-6);
            CHECK(projection_gradient(Generator::kl(), manifold, sample.points[i], theta)
                      .norm() <= 1e-8);
        }
    }
}

TEST_CASE("fiber sampling is deterministic in the seed") {
    const ModelManifold manifold = kl_exp3();
    const FiberDescription desc = fiber_description(Generator::kl(), manifold, vec({0.4}));
    const FiberSample a = sample_fiber(desc, Generator::kl(), manifold, 20, 0.05, 9);
    const FiberSample b = sample_fiber(desc, Generator::kl(), manifold, 20, 0.05, 9);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].weights() == b.points[i].weights());
    }

    const FiberSample c = sample_fiber(desc, Generator::kl(), manifold, 20, 0.05, 10);
    REQUIRE(c.points.size() > 0);
    bool any_differs = a.points.size() != c.points.size();
    for (std::size_t i = 0; !any_differs && i < a.points.size(); ++i) {
        any_differs = a.points[i].weights() != c.points[i].weights();
    }
    CHECK(any_differs);
}

TEST_CASE("curved family fiber points verify by re-projection") {
    const ModelManifold curved = make_manifold(BuiltinManifoldSpec::curved_polynomial());
    const FiberDescription desc = fiber_description(Generator::kl(), curved, vec({0.3}));
    CHECK(desc.dim() == 1);
    const FiberSample sample = sample_fiber(desc, Generator::kl(), curved, 20, 0.05, 5);
    CHECK(sample.n_verified() >= 15);
    for (const Distribution& x : sample.points) {
        CHECK(x.weights().minCoeff() > 0.0);
    }
}

TEST_CASE("a flat family is flagged degenerate") {
    const ModelManifold flat = make_manifold(BuiltinManifoldSpec::curved_polynomial(
        (Mat(1, 1) << 0.3).finished(), 2, ParamBox::cube(1, 0.02, 0.6)));
    const FiberDescription desc = fiber_description(Generator::kl(), flat, vec({0.3}));
    CHECK(desc.degenerate);
    CHECK(desc.achieved_rank == 1);
    CHECK(desc.dim() == 1);
}

TEST_CASE("sampling near the simplex boundary shrinks the radius") {
    const ModelManifold manifold = kl_exp3();
    const FiberDescription desc = fiber_description(Generator::kl(), manifold, vec({2.5}));
    const FiberSample sample = sample_fiber(desc, Generator::kl(), manifold, 50, 0.2, 3);
    CHECK(sample.radius < 0.2);
    CHECK(sample.radius >= 0.2 / 64.0);
    CHECK(sample.points.size() > 0);
    for (const Distribution& x : sample.points) {
        CHECK(x.weights().minCoeff() > 0.0);
    }
}

TEST_CASE("sampling fails cleanly when the anchor pins the boundary") {
    const ModelManifold wide = kl_exp3(20.0);
    const FiberDescription desc = fiber_description(Generator::kl(), wide, vec({13.0}));
    CHECK(desc.anchor.weights().minCoeff() < 1e-11);
    CHECK_THROWS_AS(sample_fiber(desc, Generator::kl(), wide, 1, 0.05, 12345), NumericError);
}

TEST_CASE("sampling validates its arguments") {
    const ModelManifold manifold = kl_exp3();
    const FiberDescription desc = fiber_description(Generator::kl(), manifold, vec({0.4}));
    CHECK_THROWS_AS(sample_fiber(desc, Generator::kl(), manifold, 0, 0.05, 1),
                    ContractViolation);
    CHECK_THROWS_AS(sample_fiber(desc, Generator::kl(), manifold, 10, 0.0, 1),
                    ContractViolation);
}
