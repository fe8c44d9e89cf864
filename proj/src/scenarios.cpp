#include "morselab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "morselab/errors.hpp"

namespace morselab {

Objective RadialQuartic::objective() const {
    JetFunction f = [](std::span<const ScalarJet2> v) {
        const ScalarJet2 r2 = v[0] * v[0] + v[1] * v[1];
        return -0.25 * (r2 * r2);
    };
    return Objective::function(2, std::move(f), RegularizerSpec::standard_l2(0.5 * eps));
}

Box RadialQuartic::default_box() const { return Box::cube(2, std::max(1.0, 2.0 * std::sqrt(std::abs(eps)))); }

RadialReport radial_verify(double eps, const RadialOptions& opts) {
    const RadialQuartic rq{eps};
    const Objective obj = rq.objective();
    const Box box = rq.default_box();
    SolverOptions solver = opts.solver;
    solver.seed = opts.seed;
    const Tolerances tol = resolve_tolerances(obj, box, solver);
    solver.tau_grad = tol.tau_grad;

    RadialReport r;
    r.eps = eps;
    r.tolerances = tol;
    r.points = find_critical_points(obj, box, opts.n_starts, solver);

    const double radius = eps > 0.0 ? std::sqrt(eps) : 0.0;
    double radius_sum = 0.0;
    const CriticalPoint* first_circle = nullptr;
    for (const CriticalPoint& p : r.points) {
        const double rho = p.location.norm();
        if (rho <= 1e-6) {
            r.origin_found = true;
            r.origin = p;
            continue;
        }
        ++r.circle_points;
        radius_sum += rho;
        r.max_radius_err = std::max(r.max_radius_err, std::abs(rho - radius));
        r.max_zero_eig = std::max(r.max_zero_eig, p.min_abs_eig);
        if (p.classified) r.max_curvature_err = std::max(r.max_curvature_err, std::abs(p.eigenvalues[0] + 2.0 * eps));
        r.all_circle_degenerate = r.all_circle_degenerate && p.degenerate;
        if (first_circle == nullptr) first_circle = &p;
    }
    if (r.circle_points > 0) r.circle_radius_found = radius_sum / static_cast<double>(r.circle_points);

    std::vector<NullTrace> traces;
    if (first_circle != nullptr && first_circle->degenerate) {
        const double circumference = 2.0 * std::numbers::pi * radius;
        const double step = circumference / static_cast<double>(opts.trace_samples_per_turn);
        const auto n_steps = static_cast<std::size_t>(std::ceil(1.05 * static_cast<double>(opts.trace_samples_per_turn)));
        NullTrace t = trace_null_direction(obj, *first_circle, step, n_steps, tol);
        r.loop_closed = t.arc_length >= circumference && t.closure_gap <= 1e-4;
        r.trace = t;
        traces.push_back(std::move(t));
    }
    r.verdict = morse_verdict(r.points, std::move(traces)).verdict;
    return r;
}

namespace {

void check_core_indices(const FeedforwardSpec& spec, std::size_t k1, std::size_t k2) {
    spec.validate();
    if (!spec.fully_connected()) throw InvalidInput("core locus: network must be fully connected");
    if (!spec.uses_bias) throw InvalidInput("core locus: network must have biases");
    if (spec.depth() < 2) throw InvalidInput("core locus: depth must be at least 2");
    if (!(1 <= k1 && k1 < k2 && k2 <= spec.depth())) throw InvalidInput("core locus: need 1 <= k1 < k2 <= depth");
}

// Constrained maps are 0-based k1-1, k2-1 and the last map.
bool constrained(const ParamEntry& e, std::size_t k1, std::size_t k2, std::size_t last) {
    if (e.map == last) return true;
    return e.map + 1 == k1 || e.map + 1 == k2;
}

}  // namespace

std::vector<std::size_t> core_locus_free_coords(const FeedforwardSpec& spec, std::size_t k1, std::size_t k2) {
    check_core_indices(spec, k1, k2);
    const ParamLayout layout(spec);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < layout.dim(); ++i) {
        if (!constrained(layout.entries()[i], k1, k2, spec.num_maps() - 1)) free.push_back(i);
    }
    return free;
}

Eigen::VectorXd core_locus_point(const FeedforwardSpec& spec, const DataSet& data, std::size_t k1, std::size_t k2,
                                 std::optional<std::uint64_t> free_seed, bool literal_sum) {
    check_core_indices(spec, k1, k2);
    data.validate(spec);
    const ParamLayout layout(spec);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.dim()));
    if (free_seed) {
        std::mt19937_64 rng(*free_seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (std::size_t i : core_locus_free_coords(spec, k1, k2)) alpha[static_cast<Eigen::Index>(i)] = unif(rng);
    }
    Eigen::VectorXd b_out = data.mean_target();
    if (literal_sum) b_out *= static_cast<double>(data.size());
    const std::vector<std::size_t>& bidx = layout.bias_indices(spec.num_maps() - 1);
    for (std::size_t r = 0; r < bidx.size(); ++r) alpha[static_cast<Eigen::Index>(bidx[r])] = b_out[static_cast<Eigen::Index>(r)];
    return alpha;
}

CoreLocusReport verify_core_locus(const Objective& obj, const Eigen::VectorXd& point, double tau_deg) {
    const ScalarJet2 j = obj.evaluate(point);
    const Eigen::MatrixXd H = j.hessian();
    CoreLocusReport r;
    r.grad_norm = j.gradient().norm();
    r.hess_max_abs = H.cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success) {
        const Eigen::VectorXd absw = es.eigenvalues().cwiseAbs();
        r.min_abs_eig = absw.minCoeff();
        r.eig_scale = std::max(1.0, absw.maxCoeff());
        r.degenerate = r.min_abs_eig <= tau_deg * r.eig_scale;
    } else {
        r.min_abs_eig = std::numeric_limits<double>::quiet_NaN();
        r.degenerate = true;
    }
    if (obj.is_network()) {
        for (const Sample& s : obj.dataset().samples) r.scale += s.y.squaredNorm();
    }
    return r;
}

}  // namespace morselab
