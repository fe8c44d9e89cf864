#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "morselab/errors.hpp"
#include "morselab/fixtures.hpp"
#include "morselab/scenarios.hpp"

using namespace morselab;

namespace {

Objective multiplicative_objective(const NetworkDocument& doc, double eps = 0.1) {
    return Objective::network(doc.spec, doc.data, LossKind::l2, RegularizerSpec::multiplicative(eps));
}

NetworkDocument with_activation(NetworkDocument doc, ActivationKind act) {
    doc.spec.activation = std::move(act);
    return doc;
}

}  // namespace

TEST_CASE("radial quartic objective") {
    const RadialQuartic q{0.25};
    const Objective f = q.objective();
    const ScalarJet2 j = f.evaluate(Eigen::Vector2d(0.3, 0.4));
    // r = 0.5: -r^4/4 + eps r^2/2
    CHECK(j.value() == doctest::Approx(-0.25 * 0.0625 + 0.125 * 0.25));
    CHECK(j.gradient().norm() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.default_box().hi[0] == 1.0);
    CHECK(RadialQuartic{4.0}.default_box().hi[0] == 4.0);
    CHECK(RadialQuartic{-4.0}.default_box().lo[1] == -4.0);
}

TEST_CASE("radial_verify finds the circle r = sqrt(eps)") {
    for (double eps : {0.09, 0.25, 1.0}) {
        const RadialReport r = radial_verify(eps);
        INFO("eps " << eps);
        CHECK(r.circle_points >= 8);
        CHECK(r.max_radius_err <= 1e-8);
        CHECK(std::abs(r.circle_radius_found - std::sqrt(eps)) <= 1e-8);
        CHECK(r.all_circle_degenerate);
        CHECK(r.max_zero_eig <= 1e-8);
        CHECK(r.max_curvature_err <= 1e-6);
        CHECK(r.origin_found);
        REQUIRE(r.trace.has_value());
        CHECK(r.trace->verdict == NullTrace::Verdict::critical_curve);
        CHECK(r.trace->arc_length >= 2.0 * M_PI * std::sqrt(eps));
        CHECK(r.loop_closed);
        CHECK(r.verdict == MorseReport::Verdict::positive_dimensional_found);
    }
}

TEST_CASE("radial example for eps <= 0 has only the origin") {
    const RadialReport neg = radial_verify(-0.1);
    REQUIRE(neg.points.size() == 1);
    CHECK(neg.circle_points == 0);
    REQUIRE(neg.origin.has_value());
    CHECK(neg.origin->index == 2);
    CHECK_FALSE(neg.origin->degenerate);
    CHECK(neg.origin->eigenvalues[0] == doctest::Approx(-0.1));
    CHECK(neg.origin->eigenvalues[1] == doctest::Approx(-0.1));
    CHECK(neg.verdict == MorseReport::Verdict::morse_evidence);

    const RadialReport zero = radial_verify(0.0);
    REQUIRE(zero.origin.has_value());
    CHECK(zero.origin->degenerate);
    CHECK(zero.origin->eigenvalues.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(zero.verdict != MorseReport::Verdict::morse_evidence);
}

TEST_CASE("core locus construction") {
    const NetworkDocument doc = fixtures::tanh_deep(4);
    const ParamLayout layout(doc.spec);
    const auto free = core_locus_free_coords(doc.spec, 1, 3);
    // M_2, b_2, M_4, b_4
    CHECK(free.size() == 12);

    const Eigen::VectorXd origin_like = core_locus_point(doc.spec, doc.data, 1, 3);
    const std::size_t b_out = layout.bias_indices(4).front();
    CHECK(origin_like[static_cast<Eigen::Index>(b_out)] == doctest::Approx(doc.data.mean_target()[0]));
    Eigen::VectorXd rest = origin_like;
    rest[static_cast<Eigen::Index>(b_out)] = 0.0;
    CHECK(rest.isZero(0.0));

    const Eigen::VectorXd p = core_locus_point(doc.spec, doc.data, 1, 3, 7);
    const Eigen::VectorXd q = core_locus_point(doc.spec, doc.data, 1, 3, 8);
    CHECK(p != q);
    const NetworkParams up = unpack({p.data(), layout.dim()}, doc.spec);
    for (std::size_t map : {0, 2, 4}) CHECK(up.weights[map].isZero(0.0));
    for (std::size_t map : {0, 2}) CHECK(up.biases[map].isZero(0.0));
    CHECK(up.weights[1].cwiseAbs().maxCoeff() <= 1.0);
    CHECK_FALSE(up.weights[1].isZero(0.0));
    CHECK(core_locus_point(doc.spec, doc.data, 1, 3, 7) == p);
}

TEST_CASE("random core-locus points are degenerate critical points") {
    const NetworkDocument doc = fixtures::tanh_deep(4);
    const Objective obj = multiplicative_objective(doc);
    for (std::size_t k1 = 1; k1 <= 3; ++k1) {
        for (std::size_t k2 = k1 + 1; k2 <= 4; ++k2) {
            for (std::uint64_t s : {1u, 2u}) {
                const CoreLocusReport r = verify_core_locus(obj, core_locus_point(doc.spec, doc.data, k1, k2, s));
                INFO("k1 " << k1 << " k2 " << k2);
                CHECK(r.grad_norm <= 1e-10 * r.scale);
                CHECK(r.degenerate);
            }
        }
    }
}

TEST_CASE("the literal target sum is not critical") {
    const NetworkDocument doc = fixtures::tanh_deep(4);
    const Objective obj = multiplicative_objective(doc);
    const CoreLocusReport mean = verify_core_locus(obj, core_locus_point(doc.spec, doc.data, 1, 2, 3));
    const CoreLocusReport sum = verify_core_locus(obj, core_locus_point(doc.spec, doc.data, 1, 2, 3, true));
    CHECK(mean.grad_norm <= 1e-10 * mean.scale);
    // dL/db_out = 2 n (sum y - mean y) for n = 5, sum y = 0.8
    const Eigen::VectorXd p = core_locus_point(doc.spec, doc.data, 1, 2, 3, true);
    const std::size_t b_out = obj.layout().bias_indices(4).front();
    CHECK(obj.evaluate(p).grad()[b_out] == doctest::Approx(2.0 * 5.0 * (0.8 - 0.16)).epsilon(1e-12));
    CHECK(sum.grad_norm >= 6.4);
}

TEST_CASE("origin of a shallow net") {
    SUBCASE("tanh without biases is flat to second order") {
        const NetworkDocument doc = fixtures::tanh_shallow_no_bias();
        const Objective obj = multiplicative_objective(doc);
        const CoreLocusReport r = verify_core_locus(obj, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(obj.dim())));
        CHECK(r.grad_norm <= 1e-10 * r.scale);
        CHECK(r.hess_max_abs <= 1e-10 * r.scale);
    }
    SUBCASE("tanh with biases keeps the output bias curvature") {
        const NetworkDocument doc = fixtures::tanh_deep(2);
        const Objective obj = multiplicative_objective(doc);
        const Eigen::VectorXd p = core_locus_point(doc.spec, doc.data, 1, 2);
        const CoreLocusReport r = verify_core_locus(obj, p);
        CHECK(r.grad_norm <= 1e-10 * r.scale);
        const std::size_t b_out = obj.layout().bias_indices(2).front();
        const ScalarJet2 j = obj.evaluate(p);
        CHECK(j.hess(b_out, b_out) == doctest::Approx(2.0 * static_cast<double>(doc.data.size())));
        CHECK(r.hess_max_abs == doctest::Approx(2.0 * static_cast<double>(doc.data.size())));
    }
    SUBCASE("sigmoid does not vanish") {
        const NetworkDocument doc = with_activation(fixtures::tanh_deep(2), ActivationKind::sigmoid());
        const Objective obj = multiplicative_objective(doc);
        const Eigen::VectorXd p = core_locus_point(doc.spec, doc.data, 1, 2);
        const CoreLocusReport r = verify_core_locus(obj, p);
        CHECK(r.grad_norm <= 1e-10 * r.scale);
        // d2L/dw^2 = 2 n sigma(0)^2 for an output weight w
        const std::size_t w = obj.layout().weight_coords(2).front();
        CHECK(obj.evaluate(p).hess(w, w) == doctest::Approx(2.0 * 5.0 * 0.25));
    }
}

TEST_CASE("core locus input errors") {
    const NetworkDocument deep = fixtures::tanh_deep(4);
    CHECK_THROWS_AS(core_locus_point(deep.spec, deep.data, 2, 2), InvalidInput);
    CHECK_THROWS_AS(core_locus_point(deep.spec, deep.data, 0, 2), InvalidInput);
    CHECK_THROWS_AS(core_locus_point(deep.spec, deep.data, 1, 5), InvalidInput);
    const NetworkDocument shallow = fixtures::tanh_deep(1);
    CHECK_THROWS_AS(core_locus_point(shallow.spec, shallow.data, 1, 2), InvalidInput);
    const NetworkDocument nobias = fixtures::tanh_shallow_no_bias();
    CHECK_THROWS_AS(core_locus_point(nobias.spec, nobias.data, 1, 2), InvalidInput);
}
