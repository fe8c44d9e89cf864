#include "morselab/claims.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "morselab/appendixlab.hpp"
#include "morselab/critfind.hpp"
#include "morselab/errors.hpp"
#include "morselab/fixtures.hpp"
#include "morselab/scenarios.hpp"
#include "morselab/symmetry.hpp"

namespace morselab {

using nlohmann::json;

const char* status_name(ClaimResult::Status s) {
    switch (s) {
        case ClaimResult::Status::pass: return "pass";
        case ClaimResult::Status::fail: return "fail";
        case ClaimResult::Status::skipped: return "skipped";
    }
    return "unknown";
}

namespace {

using ClaimFn = ClaimResult (*)(std::uint64_t);

const std::vector<std::pair<std::string, ClaimFn>>& registry() {
    static const std::vector<std::pair<std::string, ClaimFn>> r = {
        {"thm-4.1", claim_generic_l2_morse},  {"ex-5.1", claim_radial_circle},
        {"thm-5.1", claim_linear_orbit},      {"prop-5.2", claim_layer_invariance},
        {"prop-6.1", claim_core_locus},       {"prop-6.2", claim_origin_flat},
        {"thm-A.1", claim_polar_rank},        {"prop-A.2", claim_polynomial_bad_set},
    };
    return r;
}

ClaimResult::Status status_of(bool ok) { return ok ? ClaimResult::Status::pass : ClaimResult::Status::fail; }

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.begin(), v.end()}; }

// Distinct sub-seeds derived from the run seed.
std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Objective network_objective(const NetworkDocument& doc, RegularizerSpec reg) {
    return Objective::network(doc.spec, doc.data, LossKind::l2, std::move(reg));
}

}  // namespace

const std::vector<std::string>& claim_registry() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& [id, fn] : registry()) v.push_back(id);
        return v;
    }();
    return ids;
}

ClaimResult run_claim(const std::string& id, std::uint64_t seed) {
    for (const auto& [rid, fn] : registry()) {
        if (rid == id) return fn(seed);
    }
    throw InvalidInput("unknown claim id: " + id);
}

std::vector<ClaimResult> verify_claims(std::uint64_t seed, const std::vector<std::string>& only) {
    for (const std::string& id : only) {
        if (std::find(claim_registry().begin(), claim_registry().end(), id) == claim_registry().end()) {
            throw InvalidInput("unknown claim id: " + id);
        }
    }
    std::vector<ClaimResult> out;
    for (const std::string& id : claim_registry()) {
        if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) {
            out.push_back(run_claim(id, seed));
        } else {
            ClaimResult r;
            r.id = id;
            r.status = ClaimResult::Status::skipped;
            out.push_back(std::move(r));
        }
    }
    return out;
}

json claim_matrix_json(const std::vector<ClaimResult>& results, std::uint64_t seed) {
    json claims = json::array();
    std::size_t passed = 0, failed = 0;
    for (const ClaimResult& r : results) {
        claims.push_back({{"id", r.id},
                          {"statement", r.statement},
                          {"status", status_name(r.status)},
                          {"measurements", r.measurements},
                          {"tolerances", r.tolerances}});
        passed += r.status == ClaimResult::Status::pass;
        failed += r.status == ClaimResult::Status::fail;
    }
    return {{"schema", 1}, {"seed", seed}, {"claims", claims}, {"passed", passed}, {"failed", failed}};
}

// ---------------------------------------------------------------------------

ClaimResult claim_generic_l2_morse(std::uint64_t seed) {
    ClaimResult r;
    r.id = "thm-4.1";
    r.statement = "generalized L2 with random coefficients makes the 1-3-1 square-plus-one loss Morse";
    constexpr std::size_t kDraws = 20, kStarts = 200, kRequired = 19;
    constexpr double kRel = 1e-6;
    const Objective base = network_objective(fixtures::square_plus_one_131(), RegularizerSpec::none());
    const Box box = Box::cube(base.dim(), 5.0);
    std::mt19937_64 rng(derive(seed, 41));
    std::uniform_real_distribution<double> unif(0.01, 0.1);

    std::size_t morse = 0;
    json draws = json::array();
    for (std::size_t k = 0; k < kDraws; ++k) {
        std::vector<double> eps(base.dim());
        for (double& e : eps) e = unif(rng);
        const Objective obj = base.with_regularizer(RegularizerSpec::generalized_l2(eps));
        AnalyzeOptions opts;
        opts.n_starts = kStarts;
        opts.solver.seed = derive(seed, 1000 + k);
        const MorseReport rep = analyze(obj, box, opts);
        double min_rel = std::numeric_limits<double>::infinity();
        std::size_t minima = 0;
        for (const CriticalPoint& p : rep.points) {
            min_rel = std::min(min_rel, p.min_abs_eig / p.eig_scale);
            minima += p.index == 0 && !p.degenerate;
        }
        const bool ok = rep.verdict == MorseReport::Verdict::morse_evidence && !rep.points.empty() && min_rel > kRel;
        morse += ok;
        draws.push_back({{"eps", eps},
                         {"verdict", verdict_name(rep.verdict)},
                         {"n_points", rep.points.size()},
                         {"n_minima", minima},
                         {"min_rel_eig", min_rel},
                         {"morse", ok}});
    }
    r.measurements = {{"draws", draws}, {"morse_draws", morse}, {"total_draws", kDraws}, {"starts", kStarts}};
    r.tolerances = {{"required_morse_draws", kRequired}, {"min_rel_eig", kRel}, {"eps_range", {0.01, 0.1}}};
    r.status = status_of(morse >= kRequired);
    return r;
}

ClaimResult claim_radial_circle(std::uint64_t seed) {
    ClaimResult r;
    r.id = "ex-5.1";
    r.statement = "radial quartic plus standard L2 has a circle of degenerate critical points at radius sqrt(eps)";
    constexpr double kRadius = 1e-8, kZero = 1e-8, kCurv = 1e-6;
    bool ok = true;
    json cases = json::array();
    for (double eps : {0.09, 0.25, 1.0}) {
        RadialOptions opts;
        opts.seed = derive(seed, 51);
        const RadialReport rep = radial_verify(eps, opts);
        const bool case_ok = rep.circle_points >= 1 && rep.max_radius_err <= kRadius && rep.max_zero_eig <= kZero &&
                             rep.max_curvature_err <= kCurv && rep.all_circle_degenerate && rep.loop_closed &&
                             rep.verdict == MorseReport::Verdict::positive_dimensional_found;
        ok = ok && case_ok;
        json c = {{"eps", eps},
                  {"circle_points", rep.circle_points},
                  {"circle_radius_found", rep.circle_radius_found},
                  {"max_radius_err", rep.max_radius_err},
                  {"max_zero_eig", rep.max_zero_eig},
                  {"max_curvature_err", rep.max_curvature_err},
                  {"origin_found", rep.origin_found},
                  {"loop_closed", rep.loop_closed},
                  {"verdict", verdict_name(rep.verdict)},
                  {"pass", case_ok}};
        if (rep.trace) {
            c["trace_arc_length"] = rep.trace->arc_length;
            c["trace_closure_gap"] = rep.trace->closure_gap;
            c["trace_max_grad_norm"] = rep.trace->max_grad_norm_along;
            c["trace_verdict"] = verdict_name(rep.trace->verdict);
        }
        cases.push_back(c);
    }
    r.measurements = {{"cases", cases}};
    r.tolerances = {{"radius", kRadius}, {"zero_eig", kZero}, {"curvature", kCurv}, {"loop_closure", 1e-4}};
    r.status = status_of(ok);
    return r;
}

ClaimResult claim_linear_orbit(std::uint64_t seed) {
    ClaimResult r;
    r.id = "thm-5.1";
    r.statement = "linear 1-2-2-1 net with standard L2 has a positive-dimensional set of global minima";
    constexpr double kEps = 0.01, kZero = 1e-8, kOrbit = 1e-7;
    const Objective obj = network_objective(fixtures::linear_1221(), RegularizerSpec::standard_l2(kEps));
    const Box box = Box::cube(obj.dim(), 2.0);
    SolverOptions so;
    so.seed = derive(seed, 61);
    const Tolerances tol = resolve_tolerances(obj, box, so);
    const std::vector<CriticalPoint> pts = find_critical_points(obj, box, 128, so);
    if (pts.empty()) {
        r.measurements = {{"n_points", 0}};
        r.status = ClaimResult::Status::fail;
        return r;
    }
    const CriticalPoint* best = &pts.front();
    for (const CriticalPoint& p : pts) {
        if (p.value < best->value) best = &p;
    }
    const double scale = best->eig_scale;

    const SkewGenerator gen = SkewGenerator::make(1, (Eigen::Matrix2d() << 0.0, -1.0, 1.0, 0.0).finished());
    const std::vector<double> ts = linspace(0.0, 0.5 * std::numbers::pi, 16);
    const OrbitReport orbit = orbit_criticality(obj, best->location, gen, ts, tol.tau_grad);

    NullTrace trace;
    bool traced = false;
    if (best->degenerate) {
        trace = trace_null_direction(obj, *best, 1e-2, 20, tol);
        traced = true;
    }
    const bool ok = best->min_abs_eig <= kZero * scale && orbit.max_grad_norm_on_orbit <= kOrbit * scale && traced &&
                    trace.verdict == NullTrace::Verdict::critical_curve;
    r.measurements = {{"n_points", pts.size()},
                      {"minimizer", to_vector(best->location)},
                      {"value", best->value},
                      {"grad_norm", best->grad_norm},
                      {"eigenvalues", to_vector(best->eigenvalues)},
                      {"index", best->index},
                      {"kernel_dim", best->kernel},
                      {"min_abs_eig", best->min_abs_eig},
                      {"eig_scale", scale},
                      {"orbit_max_grad_norm", orbit.max_grad_norm_on_orbit},
                      {"orbit_arc_length", orbit.orbit_arc_length},
                      {"trace_verdict", traced ? verdict_name(trace.verdict) : "not_traced"},
                      {"trace_max_grad_norm", trace.max_grad_norm_along},
                      {"trace_arc_length", trace.arc_length}};
    r.tolerances = {{"eps", kEps}, {"zero_eig_rel", kZero}, {"orbit_grad_rel", kOrbit}, {"tau_grad", tol.tau_grad}};
    r.status = status_of(ok);
    return r;
}

ClaimResult claim_layer_invariance(std::uint64_t seed) {
    ClaimResult r;
    r.id = "prop-5.2";
    r.statement = "hidden-layer rotations leave the linear-network loss unchanged and change the tanh-network loss";
    constexpr double kInv = 1e-10, kBroken = 1e-3;
    const NetworkDocument lin = fixtures::linear_1221();
    const Objective L = network_objective(lin, RegularizerSpec::none());
    const Objective Le = L.with_regularizer(RegularizerSpec::standard_l2(0.01));
    const Objective T = network_objective(fixtures::linear_1221(ActivationKind::tanh()), RegularizerSpec::none());

    std::mt19937_64 rng(derive(seed, 52));
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::VectorXd alpha(static_cast<Eigen::Index>(L.dim()));
    for (double& a : alpha) a = unif(rng);

    double max_rel_L = 0.0, max_rel_Le = 0.0, max_tanh = 0.0, max_norm_change = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
        const LayerAction act = LayerAction::make(1 + k % 2, random_rotation(2, rng));
        max_rel_L = std::max(max_rel_L, check_invariance(L, alpha, act) / (1.0 + std::abs(L.value(alpha))));
        max_rel_Le = std::max(max_rel_Le, check_invariance(Le, alpha, act) / (1.0 + std::abs(Le.value(alpha))));
        max_tanh = std::max(max_tanh, check_invariance(T, alpha, act));
        const Eigen::VectorXd moved = apply_layer_symmetry(lin.spec, {alpha.data(), L.dim()}, act);
        max_norm_change = std::max(max_norm_change, std::abs(moved.norm() - alpha.norm()));
    }
    r.measurements = {{"max_rel_defect_loss", max_rel_L},
                      {"max_rel_defect_regularized", max_rel_Le},
                      {"max_defect_tanh", max_tanh},
                      {"max_norm_change", max_norm_change},
                      {"rotations", 10}};
    r.tolerances = {{"invariance_rel", kInv}, {"tanh_defect_min", kBroken}};
    r.status = status_of(max_rel_L <= kInv && max_rel_Le <= kInv && max_tanh > kBroken);
    return r;
}

ClaimResult claim_core_locus(std::uint64_t seed) {
    ClaimResult r;
    r.id = "prop-6.1";
    r.statement = "core-locus points of a depth-4 tanh net are degenerate critical points of the multiplicative objective";
    constexpr double kGrad = 1e-10, kDeg = 1e-6;
    constexpr std::size_t kPoints = 20;
    const NetworkDocument doc = fixtures::tanh_deep(4);
    const Objective obj = network_objective(doc, RegularizerSpec::multiplicative(0.1));
    const std::size_t depth = doc.spec.depth();

    bool ok = true;
    json pairs = json::array();
    std::uint64_t stream = 0;
    for (std::size_t k1 = 1; k1 <= depth; ++k1) {
        for (std::size_t k2 = k1 + 1; k2 <= depth; ++k2) {
            const Eigen::VectorXd origin = core_locus_point(doc.spec, doc.data, k1, k2);
            const std::size_t n_free = core_locus_free_coords(doc.spec, k1, k2).size();
            Eigen::MatrixXd diffs(static_cast<Eigen::Index>(obj.dim()), static_cast<Eigen::Index>(kPoints));
            double max_rel_grad = 0.0;
            bool all_degenerate = true;
            for (std::size_t i = 0; i < kPoints; ++i) {
                const Eigen::VectorXd p = core_locus_point(doc.spec, doc.data, k1, k2, derive(seed, 600 + stream++));
                const CoreLocusReport rep = verify_core_locus(obj, p, kDeg);
                max_rel_grad = std::max(max_rel_grad, rep.grad_norm / rep.scale);
                all_degenerate = all_degenerate && rep.degenerate;
                diffs.col(static_cast<Eigen::Index>(i)) = p - origin;
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs);
            const Eigen::VectorXd sv = svd.singularValues();
            const double thr = 1e-10 * std::max(1.0, sv[0]);
            const auto rank = static_cast<std::size_t>((sv.array() > thr).count());
            const bool pair_ok = max_rel_grad <= kGrad && all_degenerate && rank == n_free;
            ok = ok && pair_ok;
            pairs.push_back({{"k1", k1},
                             {"k2", k2},
                             {"max_rel_grad_norm", max_rel_grad},
                             {"all_degenerate", all_degenerate},
                             {"span_dim", rank},
                             {"free_coords", n_free},
                             {"pass", pair_ok}});
        }
    }
    r.measurements = {{"pairs", pairs}, {"points_per_pair", kPoints}};
    r.tolerances = {{"grad_rel", kGrad}, {"tau_deg", kDeg}};
    r.status = status_of(ok);
    return r;
}

ClaimResult claim_origin_flat(std::uint64_t seed) {
    (void)seed;
    ClaimResult r;
    r.id = "prop-6.2";
    r.statement = "gradient and Hessian of the multiplicative objective vanish at the origin of a bias-free depth-2 tanh net";
    constexpr double kTol = 1e-10;
    const NetworkDocument doc = fixtures::tanh_shallow_no_bias();
    const Objective obj = network_objective(doc, RegularizerSpec::multiplicative(0.1));
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(obj.dim()));
    const CoreLocusReport rep = verify_core_locus(obj, origin);

    // With biases the output bias keeps a curvature of 2n, so the Hessian
    // cannot vanish there; reported for comparison only.
    const NetworkDocument biased = fixtures::tanh_deep(2);
    const Objective obj_b = network_objective(biased, RegularizerSpec::multiplicative(0.1));
    const Eigen::VectorXd pb = core_locus_point(biased.spec, biased.data, 1, 2);
    const CoreLocusReport rep_b = verify_core_locus(obj_b, pb);
    const std::size_t b_out = obj_b.layout().bias_indices(biased.spec.num_maps() - 1).front();
    const double out_bias_curv = obj_b.evaluate(pb).hess(b_out, b_out);

    r.measurements = {{"grad_norm", rep.grad_norm},
                      {"hess_max_abs", rep.hess_max_abs},
                      {"scale", rep.scale},
                      {"with_bias_grad_norm", rep_b.grad_norm},
                      {"with_bias_hess_max_abs", rep_b.hess_max_abs},
                      {"with_bias_output_bias_curvature", out_bias_curv},
                      {"samples", doc.data.size()}};
    r.tolerances = {{"rel", kTol}};
    r.status = status_of(rep.grad_norm <= kTol * rep.scale && rep.hess_max_abs <= kTol * rep.scale);
    return r;
}

ClaimResult claim_polar_rank(std::uint64_t seed) {
    ClaimResult r;
    r.id = "thm-A.1";
    r.statement = "rho cos(theta) meets the polar rank condition and its eps*rho perturbations are Morse";
    PolarFunction L;
    L.f = [](std::span<const ScalarJet2> v) { return v[0] * cos(v[1]); };
    const std::vector<JetCheckPoint> pts = jet_condition_check(L);
    const bool all_pass =
        !pts.empty() && std::all_of(pts.begin(), pts.end(), [](const JetCheckPoint& p) { return p.passes; });

    PolarFunction radial;
    radial.f = [](std::span<const ScalarJet2> v) { return -0.25 * (v[0] * v[0]); };
    const std::vector<JetCheckPoint> rpts = jet_condition_check(radial);
    const bool radial_fails =
        !rpts.empty() && std::none_of(rpts.begin(), rpts.end(), [](const JetCheckPoint& p) { return p.passes; });

    std::mt19937_64 rng(derive(seed, 71));
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::size_t morse = 0;
    json eps_cases = json::array();
    for (std::size_t k = 0; k < 10;) {
        const double eps = unif(rng);
        if (std::abs(std::abs(eps) - 1.0) <= 0.05) continue;
        AnalyzeOptions opts;
        opts.n_starts = 32;
        opts.solver.seed = derive(seed, 700 + k);
        const MorseReport rep = perturbed_polar_analysis(L, eps, opts);
        const bool ok = rep.verdict == MorseReport::Verdict::morse_evidence;
        morse += ok;
        eps_cases.push_back({{"eps", eps}, {"verdict", verdict_name(rep.verdict)}, {"n_points", rep.points.size()},
                             {"vacuous", rep.vacuous}});
        ++k;
    }
    r.measurements = {{"checked_points", pts.size()},
                      {"all_rank_one", all_pass},
                      {"radial_checked_points", rpts.size()},
                      {"radial_all_rank_deficient", radial_fails},
                      {"perturbations", eps_cases},
                      {"morse_perturbations", morse}};
    r.tolerances = {{"rank_rel", JetCheckOptions{}.rank_rel_tol}, {"rho_range", {L.rho_min, L.rho_max}}};
    r.status = status_of(all_pass && radial_fails && morse == 10);
    return r;
}

namespace {

bool same_roots(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol) return false;
    }
    return true;
}

}  // namespace

ClaimResult claim_polynomial_bad_set(std::uint64_t seed) {
    ClaimResult r;
    r.id = "prop-A.2";
    r.statement = "bad eps sets: continuum for the radial quartic, {0} for zero, finite for random quartics";
    constexpr std::size_t kGrid = 64, kMaxRoots = 10;
    constexpr double kStable = 1e-6;
    const Box box = Box::cube(2, 2.0);
    ScanOptions opts;
    opts.solver.seed = derive(seed, 81);

    const std::vector<double> grid = linspace(-1.0, 1.0, kGrid);
    const BadSetEstimate radial = scan_bad_eps(radial_quartic_polynomial(), grid, box, opts);
    double first_positive = 0.0;
    for (double e : grid) {
        if (e > 0.0) {
            first_positive = e;
            break;
        }
    }
    const bool radial_ok = std::any_of(radial.continuum.begin(), radial.continuum.end(), [&](const auto& c) {
        return c.first <= first_positive && c.second >= grid.back();
    });

    const BadSetEstimate zero = scan_bad_eps(Polynomial(2, 0), grid, box, opts);
    const bool zero_ok =
        zero.continuum.empty() && zero.isolated_bad_eps.size() == 1 && std::abs(zero.isolated_bad_eps[0]) <= 1e-8;

    bool random_ok = true;
    json randoms = json::array();
    const std::vector<double> fine = linspace(-1.0, 1.0, 2 * kGrid - 1);
    for (std::uint64_t k = 1; k <= 5; ++k) {
        const Polynomial p = random_polynomial(2, 4, derive(seed, 800 + k));
        const BadSetEstimate coarse_est = scan_bad_eps(p, grid, box, opts);
        const BadSetEstimate fine_est = scan_bad_eps(p, fine, box, opts);
        const bool stable = same_roots(coarse_est.isolated_bad_eps, fine_est.isolated_bad_eps, kStable);
        const bool ok = coarse_est.continuum.empty() && fine_est.continuum.empty() &&
                        coarse_est.isolated_bad_eps.size() <= kMaxRoots && stable;
        random_ok = random_ok && ok;
        std::vector<double> coeffs;
        for (const Monomial& m : p.terms()) coeffs.push_back(m.coeff);
        randoms.push_back({{"coeffs", coeffs},
                           {"bad_eps", coarse_est.isolated_bad_eps},
                           {"bad_eps_refined_grid", fine_est.isolated_bad_eps},
                           {"continuum_flags", coarse_est.continuum.size() + fine_est.continuum.size()},
                           {"stable", stable},
                           {"pass", ok}});
    }
    r.measurements = {{"radial", to_json(radial)},
                      {"radial_continuum_covers_positive_eps", radial_ok},
                      {"zero", to_json(zero)},
                      {"random_quartics", randoms}};
    r.tolerances = {{"max_roots", kMaxRoots},
                    {"refinement_stability", kStable},
                    {"zero_root", 1e-8},
                    {"bisect_tol", opts.bisect_tol},
                    {"grid", {grid.front(), grid.back(), kGrid}}};
    r.status = status_of(radial_ok && zero_ok && random_ok);
    return r;
}

}  // namespace morselab
