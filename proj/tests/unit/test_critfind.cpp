#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "morselab/critfind.hpp"

using namespace morselab;

namespace {

Objective fn2(std::function<ScalarJet2(const ScalarJet2&, const ScalarJet2&)> f) {
    return Objective::function(2, [f](std::span<const ScalarJet2> x) { return f(x[0], x[1]); });
}

const Objective bowl = fn2([](const ScalarJet2& x, const ScalarJet2& y) { return x * x + y * y; });
const Objective saddle = fn2([](const ScalarJet2& x, const ScalarJet2& y) { return x * x - y * y; });
const Objective double_well = fn2([](const ScalarJet2& x, const ScalarJet2& y) {
    return square(x * x - 1.0) + square(y * y - 1.0) + 0.3 * x;
});
const Objective wave = fn2([](const ScalarJet2& x, const ScalarJet2& y) { return sin(x) * cos(y); });

// -r^4/4 + eps r^2 / 2
Objective radial(double eps) {
    return fn2([eps](const ScalarJet2& x, const ScalarJet2& y) {
        const ScalarJet2 r2 = x * x + y * y;
        return -0.25 * r2 * r2 + 0.5 * eps * r2;
    });
}

Tolerances tol_for(const Objective& obj, const Box& box) { return resolve_tolerances(obj, box, SolverOptions{}); }

}  // namespace

TEST_CASE("box helpers") {
    const Box b = Box::cube(3, 2.0);
    CHECK(b.dim() == 3);
    CHECK(b.center().isZero(0.0));
    CHECK(b.mean_half_width() == 2.0);
    CHECK(b.contains(Eigen::Vector3d(2.0, -2.0, 0.0)));
    CHECK_FALSE(b.contains(Eigen::Vector3d(2.1, 0.0, 0.0)));
    CHECK(b.contains(Eigen::Vector3d(2.1, 0.0, 0.0), 0.2));
    CHECK_THROWS(Box::from_bounds(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)));
}

TEST_CASE("start points are deterministic and lie in the box") {
    const Box b = Box::from_bounds(Eigen::Vector2d(-1, 0), Eigen::Vector2d(3, 0.5));
    const auto s1 = start_points(b, 50, 7), s2 = start_points(b, 50, 7), s3 = start_points(b, 50, 8);
    REQUIRE(s1.size() == 50);
    bool differs = false;
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i] == s2[i]);
        CHECK(b.contains(s1[i]));
        differs = differs || s1[i] != s3[i];
    }
    CHECK(differs);
}

TEST_CASE("convex quadratic: one minimum") {
    const Box box = Box::cube(2, 2.0);
    const auto pts = find_critical_points(bowl, box, 10);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].location.norm() < 1e-10);
    CHECK(pts[0].index == 0);
    CHECK_FALSE(pts[0].degenerate);
    CHECK(pts[0].eigenvalues[0] == doctest::Approx(2.0));
    CHECK(pts[0].eigenvalues[1] == doctest::Approx(2.0));
}

TEST_CASE("quadratic saddle has index 1") {
    const auto pts = find_critical_points(saddle, Box::cube(2, 2.0), 10);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].location.norm() < 1e-10);
    CHECK(pts[0].index == 1);
    CHECK(pts[0].positive == 1);
    CHECK_FALSE(pts[0].degenerate);
}

TEST_CASE("radial example: a circle of degenerate points") {
    const Objective f = radial(0.25);
    const Box box = Box::cube(2, 1.0);
    const auto pts = find_critical_points(f, box, 64);
    std::size_t on_circle = 0;
    bool origin = false;
    for (const CriticalPoint& p : pts) {
        if (p.location.norm() < 1e-8) {
            origin = true;
            CHECK(p.index == 0);
            continue;
        }
        CHECK(std::abs(p.location.norm() - 0.5) <= 1e-8);
        CHECK(p.degenerate);
        CHECK(p.eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-8));
        CHECK(std::abs(p.eigenvalues[1]) < 1e-8);
        ++on_circle;
    }
    CHECK(origin);
    CHECK(on_circle >= 8);
}

TEST_CASE("classification") {
    const Box box = Box::cube(2, 1.0);
    const CriticalPoint c = classify(bowl, Eigen::Vector2d::Zero(), tol_for(bowl, box));
    CHECK(c.index == 0);
    CHECK(c.kernel == 0);
    CHECK(c.min_abs_eig == 2.0);

    const Objective flat = fn2([](const ScalarJet2& x, const ScalarJet2& y) { return x * x * y * y; });
    const CriticalPoint d = classify(flat, Eigen::Vector2d::Zero(), tol_for(flat, box));
    CHECK(d.degenerate);
    CHECK(d.kernel == 2);
    CHECK(d.min_abs_eig == 0.0);

    CHECK_THROWS_AS(classify(bowl, Eigen::Vector2d(1.0, 0.0), tol_for(bowl, box)), PreconditionError);
}

TEST_CASE("point invariants on a function with several critical points") {
    const Box box = Box::cube(2, 2.0);
    const Tolerances tol = tol_for(double_well, box);
    const auto pts = find_critical_points(double_well, box, 64);
    CHECK(pts.size() == 9);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].grad_norm <= tol.tau_grad);
        CHECK(pts[i].index + pts[i].positive + pts[i].kernel == 2);
        for (std::size_t j = i + 1; j < pts.size(); ++j) CHECK((pts[i].location - pts[j].location).norm() > tol.dedupe_radius);
    }
}

TEST_CASE("grid oracle: every sign-change cell holds an accepted point") {
    struct Case {
        const char* name;
        const Objective* obj;
    };
    for (const Case& c : {Case{"bowl", &bowl}, Case{"saddle", &saddle}, Case{"double_well", &double_well},
                          Case{"wave", &wave}}) {
        const Box box = Box::cube(2, 2.0);
        const auto pts = find_critical_points(*c.obj, box, 64);
        const double r = tol_for(*c.obj, box).dedupe_radius;
        constexpr int n = 41;
        const double h = 4.0 / (n - 1);
        auto grad = [&](int i, int j) {
            return c.obj->evaluate(Eigen::Vector2d(-2.0 + h * i, -2.0 + h * j)).gradient();
        };
        std::vector<Eigen::VectorXd> g(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g[i * n + j] = grad(i, j);
        std::size_t flagged = 0;
        for (int i = 0; i + 1 < n; ++i) {
            for (int j = 0; j + 1 < n; ++j) {
                bool change[2];
                for (int k = 0; k < 2; ++k) {
                    double lo = INFINITY, hi = -INFINITY;
                    for (int di = 0; di < 2; ++di)
                        for (int dj = 0; dj < 2; ++dj) {
                            lo = std::min(lo, g[(i + di) * n + j + dj][k]);
                            hi = std::max(hi, g[(i + di) * n + j + dj][k]);
                        }
                    change[k] = lo <= 0.0 && hi >= 0.0;
                }
                if (!change[0] || !change[1]) continue;
                ++flagged;
                const Box cell = Box::from_bounds(Eigen::Vector2d(-2.0 + h * i, -2.0 + h * j),
                                                  Eigen::Vector2d(-2.0 + h * (i + 1), -2.0 + h * (j + 1)));
                bool hit = false;
                for (const CriticalPoint& p : pts) hit = hit || cell.contains(p.location, r);
                INFO(c.name << " cell " << i << "," << j);
                CHECK(hit);
            }
        }
        INFO(c.name);
        CHECK(flagged > 0);
    }
}

TEST_CASE("null-direction trace") {
    SUBCASE("circle of critical points is a curve") {
        const Objective f = radial(0.25);
        const Box box = Box::cube(2, 1.0);
        const Tolerances tol = tol_for(f, box);
        const CriticalPoint p = classify(f, Eigen::Vector2d(0.5, 0.0), tol);
        REQUIRE(p.degenerate);
        const NullTrace t = trace_null_direction(f, p, 2.0 * M_PI * 0.5 / 400.0, 420, tol);
        CHECK(t.verdict == NullTrace::Verdict::critical_curve);
        CHECK(t.arc_length >= 1.0);
        CHECK(t.max_grad_norm_along <= tol.tau_grad);
        for (const Eigen::VectorXd& s : t.samples) CHECK(std::abs(s.norm() - 0.5) <= 1e-6);
        CHECK(t.closure_gap < 1e-4);
    }
    SUBCASE("quartic valley point is isolated") {
        const Objective f = fn2([](const ScalarJet2& x, const ScalarJet2& y) { return x * x - square(y * y); });
        const Box box = Box::cube(2, 1.0);
        const Tolerances tol = tol_for(f, box);
        const CriticalPoint p = classify(f, Eigen::Vector2d::Zero(), tol);
        REQUIRE(p.degenerate);
        const NullTrace t = trace_null_direction(f, p, 0.05, 10, tol);
        CHECK(t.verdict == NullTrace::Verdict::isolated);
    }
    SUBCASE("nondegenerate start is rejected") {
        const Box box = Box::cube(2, 1.0);
        const Tolerances tol = tol_for(bowl, box);
        const CriticalPoint p = classify(bowl, Eigen::Vector2d::Zero(), tol);
        CHECK_THROWS_AS(trace_null_direction(bowl, p, 0.01, 10, tol), PreconditionError);
    }
}

TEST_CASE("verdict precedence") {
    const Box box = Box::cube(2, 1.0);
    const CriticalPoint good = classify(bowl, Eigen::Vector2d::Zero(), tol_for(bowl, box));
    const Objective flat = fn2([](const ScalarJet2& x, const ScalarJet2& y) { return x * x * y * y; });
    const CriticalPoint bad = classify(flat, Eigen::Vector2d::Zero(), tol_for(flat, box));

    const MorseReport empty = morse_verdict({}, {});
    CHECK(empty.verdict == MorseReport::Verdict::morse_evidence);
    CHECK(empty.vacuous);

    const MorseReport ok = morse_verdict({good}, {});
    CHECK(ok.verdict == MorseReport::Verdict::morse_evidence);
    CHECK_FALSE(ok.vacuous);

    CHECK(morse_verdict({good, bad}, {}).verdict == MorseReport::Verdict::degenerate_found);

    NullTrace curve;
    curve.verdict = NullTrace::Verdict::critical_curve;
    NullTrace iso;
    CHECK(morse_verdict({good, bad}, {iso}).verdict == MorseReport::Verdict::degenerate_found);
    CHECK(morse_verdict({good, bad}, {iso, curve}).verdict == MorseReport::Verdict::positive_dimensional_found);

    CHECK(std::string(verdict_name(MorseReport::Verdict::positive_dimensional_found)) == "positive_dimensional_found");
    CHECK(std::string(verdict_name(NullTrace::Verdict::critical_curve)) == "critical_curve");
}

TEST_CASE("analyze end to end") {
    AnalyzeOptions opts;
    opts.n_starts = 64;
    const MorseReport r = analyze(radial(0.25), Box::cube(2, 1.0), opts);
    CHECK(r.verdict == MorseReport::Verdict::positive_dimensional_found);
    CHECK(r.starts == 64);

    const MorseReport w = analyze(double_well, Box::cube(2, 2.0), opts);
    CHECK(w.verdict == MorseReport::Verdict::morse_evidence);
    CHECK(w.traces.empty());

    // Nothing critical in a box away from the origin.
    const MorseReport v = analyze(bowl, Box::from_bounds(Eigen::Vector2d(1, 1), Eigen::Vector2d(2, 2)), opts);
    CHECK(v.points.empty());
    CHECK(v.vacuous);
}

TEST_CASE("results are deterministic") {
    SolverOptions s;
    s.seed = 123;
    const Box box = Box::cube(2, 2.0);
    const auto a = find_critical_points(wave, box, 40, s);
    const auto b = find_critical_points(wave, box, 40, s);
    CHECK(critical_points_csv(a, 2) == critical_points_csv(b, 2));
    REQUIRE(a.size() == 4);
}

TEST_CASE("CSV layout") {
    CHECK(critical_points_csv({}, 2) == "x_0,x_1,value,grad_norm,lambda_0,lambda_1,min_abs_eig,index,degenerate\n");
    const auto pts = find_critical_points(saddle, Box::cube(2, 1.0), 4);
    const std::string csv = critical_points_csv(pts, 2);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.substr(csv.rfind(',') + 1) == "0\n");
}

TEST_CASE("solver input errors") {
    CHECK_THROWS(find_critical_points(bowl, Box::cube(2, 1.0), 0));
    CHECK_THROWS(find_critical_points(bowl, Box::cube(3, 1.0), 4));
}
