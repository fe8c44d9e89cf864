#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

#include "morselab/fixtures.hpp"
#include "morselab/regularizers.hpp"

using namespace morselab;

namespace {

Eigen::VectorXd random_vec(std::mt19937_64& rng, std::size_t d, double r = 1.0) {
    std::uniform_real_distribution<double> u(-r, r);
    Eigen::VectorXd a(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = u(rng);
    return a;
}

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Objective net_131(RegularizerSpec reg = RegularizerSpec::none()) {
    NetworkDocument doc = fixtures::square_plus_one_131();
    return Objective::network(doc.spec, doc.data, LossKind::l2, std::move(reg));
}

}  // namespace

TEST_CASE("generalized_l2") {
    const std::vector<double> a{1.0, 2.0}, e{0.1, 0.01};
    CHECK(generalized_l2<double>(a, e) == doctest::Approx(0.14).epsilon(1e-15));
    const std::vector<double> z{0.0, 0.0};
    CHECK(generalized_l2<double>(a, z) == 0.0);
    const std::vector<double> e3{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(generalized_l2<double>(a, e3), DimensionMismatch);

    const ScalarJet2 j = generalized_l2<ScalarJet2>(seed(a), e);
    CHECK(j.grad()[0] == doctest::Approx(0.2));
    CHECK(j.grad()[1] == doctest::Approx(0.04));
    CHECK(j.hess(0, 0) == doctest::Approx(0.2));
    CHECK(j.hess(1, 1) == doctest::Approx(0.02));
    CHECK(j.hess(0, 1) == 0.0);
}

TEST_CASE("standard_l2") {
    const std::vector<double> a{1.0, 1.0, 1.0};
    CHECK(standard_l2<double>(a, 2.0) == 6.0);
    const std::vector<double> z{0.0, 0.0, 0.0};
    const ScalarJet2 j0 = standard_l2<ScalarJet2>(seed(z), 2.0);
    CHECK(j0.value() == 0.0);
    CHECK(j0.gradient().isZero(0.0));

    std::mt19937_64 rng(1);
    const Eigen::VectorXd p = random_vec(rng, 6);
    const ScalarJet2 j = standard_l2<ScalarJet2>(seed(as_span(p)), 0.3);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(j.hessian()).eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("constant generalized_l2 equals standard_l2 to the last bit") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ue(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = 1 + static_cast<std::size_t>(t % 12);
        const Eigen::VectorXd p = random_vec(rng, d, 3.0);
        const double eps = ue(rng);
        const std::vector<double> ev(d, eps);
        const double g = generalized_l2<double>(as_span(p), ev);
        const double s = standard_l2<double>(as_span(p), eps);
        REQUIRE(std::memcmp(&g, &s, sizeof g) == 0);
        if (t % 50 == 0) {
            const auto x = seed(as_span(p));
            const ScalarJet2 gj = generalized_l2<ScalarJet2>(x, ev), sj = standard_l2<ScalarJet2>(x, eps);
            CHECK(gj.gradient() == sj.gradient());
            CHECK(gj.hessian() == sj.hessian());
        }
    }
}

TEST_CASE("standard_l2 is orthogonally invariant") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const std::size_t d = 2 + static_cast<std::size_t>(t % 7);
        const Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(
            static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d),
            [&] { return std::normal_distribution<double>()(rng); });
        const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
        const Eigen::VectorXd p = random_vec(rng, d, 2.0);
        const Eigen::VectorXd qp = Q * p;
        const double a = standard_l2<double>(as_span(p), 0.7), b = standard_l2<double>(as_span(qp), 0.7);
        CHECK(std::abs(a - b) <= 1e-12 * a);
    }
}

TEST_CASE("multiplicative regularizer") {
    FeedforwardSpec s;
    s.widths = {1, 2, 1};
    s.activation = ActivationKind::tanh();
    const ParamLayout layout(s);
    // M1 = [1 2]^T (2x1), M2 = [3 4] (1x2); biases after each map.
    const std::vector<double> a{1.0, 2.0, 0.0, 0.0, 3.0, 4.0, 0.0};
    CHECK(multiplicative<double>(layout, a, 0.1) == doctest::Approx(12.5).epsilon(1e-15));
    CHECK(multiplicative<double>(layout, a, 0.0) == 0.0);

    const std::vector<double> shifted{1.0, 2.0, 5.0, -3.0, 3.0, 4.0, 7.0};
    CHECK(multiplicative<double>(layout, shifted, 0.1) == multiplicative<double>(layout, a, 0.1));

    const std::vector<double> two_zero{0.0, 0.0, 0.4, 0.1, 0.0, 0.0, -0.2};
    const ScalarJet2 j = multiplicative<ScalarJet2>(layout, seed(two_zero), 0.5);
    CHECK(j.value() == 0.0);
    CHECK(j.gradient().isZero(0.0));

    CHECK_THROWS_AS(multiplicative<double>(layout, std::vector<double>(3, 0.0), 0.1), DimensionMismatch);
}

TEST_CASE("multiplicative regularizer ignores biases") {
    const Objective obj = net_131(RegularizerSpec::multiplicative(0.3));
    const Objective reg_only = obj.with_regularizer(RegularizerSpec::multiplicative(0.3));
    std::mt19937_64 rng(4);
    const auto& entries = obj.layout().entries();
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd p = random_vec(rng, obj.dim());
        const ScalarJet2 r = reg_only.evaluate_parts(p).reg;
        for (std::size_t k = 0; k < entries.size(); ++k) {
            if (entries[k].is_bias) CHECK(r.grad()[k] == 0.0);
        }
    }
}

TEST_CASE("regularized objective is the exact sum of its parts") {
    const Objective plain = net_131();
    const double eps = 0.05;
    const Objective reg = regularized_objective(plain, RegularizerSpec::standard_l2(eps));
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const Eigen::VectorXd p = random_vec(rng, plain.dim(), 2.0);
        const ScalarJet2 a = plain.evaluate(p);
        const ObjectiveParts parts = reg.evaluate_parts(p);
        const ScalarJet2 total = reg.evaluate(p);
        CHECK(parts.data.gradient() == a.gradient());
        CHECK(total.gradient() == (parts.data + parts.reg).gradient());
        const Eigen::MatrixXd diff = total.hessian() - a.hessian();
        const Eigen::MatrixXd expect = 2.0 * eps * Eigen::MatrixXd::Identity(10, 10);
        CHECK((diff - expect).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + a.hessian().cwiseAbs().maxCoeff()));
    }
    CHECK(reg.value(Eigen::VectorXd::Zero(10)) == plain.value(Eigen::VectorXd::Zero(10)));

    const Objective none = regularized_objective(plain, RegularizerSpec::none());
    const Eigen::VectorXd p = random_vec(rng, 10);
    CHECK(none.evaluate(p).value() == plain.evaluate(p).value());
}

TEST_CASE("objective construction errors") {
    const Objective plain = net_131();
    CHECK_THROWS_AS(plain.with_regularizer(RegularizerSpec::generalized_l2({0.1, 0.2})), DimensionMismatch);
    const Objective f = Objective::function(2, [](std::span<const ScalarJet2> x) { return x[0] * x[1]; });
    CHECK_THROWS_AS(f.with_regularizer(RegularizerSpec::multiplicative(0.1)), InvalidInput);
    CHECK_THROWS_AS(Objective::function(0, [](std::span<const ScalarJet2> x) { return x[0]; }), InvalidInput);
    CHECK_THROWS_AS(f.evaluate(Eigen::VectorXd::Zero(3)), DimensionMismatch);
    CHECK_FALSE(f.is_network());
    CHECK_THROWS_AS(f.layout(), InvalidInput);
}
