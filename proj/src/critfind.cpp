#include "morselab/critfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "morselab/errors.hpp"
#include "morselab/report.hpp"

namespace morselab {

Box Box::cube(std::size_t dim, double half_width) {
    if (!(half_width > 0.0)) throw InvalidInput("box half width must be positive");
    const auto n = static_cast<Eigen::Index>(dim);
    return {Eigen::VectorXd::Constant(n, -half_width), Eigen::VectorXd::Constant(n, half_width)};
}

Box Box::from_bounds(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size() || lo.size() == 0) throw InvalidInput("box bounds must be nonempty and equal length");
    if (!((hi - lo).array() > 0.0).all()) throw InvalidInput("box bounds must satisfy lo < hi");
    if (!lo.allFinite() || !hi.allFinite()) throw InvalidInput("box must be bounded");
    return {std::move(lo), std::move(hi)};
}

bool Box::contains(const Eigen::VectorXd& x, double slack) const {
    const Eigen::ArrayXd pad = slack * (hi - lo).array();
    return (x.array() >= lo.array() - pad).all() && (x.array() <= hi.array() + pad).all();
}

Tolerances resolve_tolerances(const Objective& obj, const Box& box, const SolverOptions& opts) {
    Tolerances tol;
    tol.tau_deg = opts.tau_deg;
    tol.dedupe_radius = opts.dedupe_radius;
    if (opts.tau_grad > 0.0) {
        tol.tau_grad = opts.tau_grad;
    } else {
        const double g0 = obj.evaluate(box.center()).gradient().norm();
        tol.tau_grad = opts.tau_grad_rel * (1.0 + (std::isfinite(g0) ? g0 : 0.0));
    }
    return tol;
}

Eigen::VectorXd CriticalPoint::null_direction() const {
    Eigen::Index best = 0;
    eigenvalues.cwiseAbs().minCoeff(&best);
    return eigenvectors.col(best);
}

namespace {

void fill_spectrum(CriticalPoint& cp, const Eigen::MatrixXd& hess, double tau_deg) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    if (es.info() != Eigen::Success) {
        cp.classified = false;
        cp.degenerate = true;
        return;
    }
    cp.eigenvalues = es.eigenvalues();
    cp.eigenvectors = es.eigenvectors();
    cp.eig_scale = std::max(1.0, cp.eigenvalues.cwiseAbs().maxCoeff());
    const double thr = tau_deg * cp.eig_scale;
    cp.index = cp.positive = cp.kernel = 0;
    for (Eigen::Index i = 0; i < cp.eigenvalues.size(); ++i) {
        const double l = cp.eigenvalues[i];
        if (l < -thr) {
            ++cp.index;
        } else if (l > thr) {
            ++cp.positive;
        } else {
            ++cp.kernel;
        }
    }
    cp.min_abs_eig = cp.eigenvalues.cwiseAbs().minCoeff();
    cp.degenerate = cp.min_abs_eig <= thr;
}

struct Evaluation {
    bool finite = false;
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    double grad_norm = std::numeric_limits<double>::infinity();
};

Evaluation evaluate(const Objective& obj, const Eigen::VectorXd& x) {
    Evaluation e;
    const ScalarJet2 j = obj.evaluate(x);
    e.value = j.value();
    e.grad = j.gradient();
    e.hess = j.hessian();
    e.finite = std::isfinite(e.value) && e.grad.allFinite() && e.hess.allFinite();
    if (e.finite) e.grad_norm = e.grad.norm();
    return e;
}

// Damped Newton step on grad = 0: delta = -(H^2 + lambda I)^{-1} H g, applied in
// the Hessian eigenbasis so a singular H never breaks the solve.
class StepSolver {
public:
    explicit StepSolver(const Evaluation& e) : grad_(e.grad), hess_(e.hess), es_(e.hess) {
        ok_ = es_.info() == Eigen::Success;
        if (ok_) coeffs_ = es_.eigenvectors().transpose() * e.grad;
    }

    Eigen::VectorXd step(double lambda) const {
        if (!ok_) {
            // Gradient-descent step on |g|^2 / 2.
            const Eigen::VectorXd dir = hess_ * grad_;
            return -dir / (hess_.squaredNorm() + lambda);
        }
        const Eigen::VectorXd& w = es_.eigenvalues();
        Eigen::VectorXd c = coeffs_;
        for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= w[k] / (w[k] * w[k] + lambda);
        return -(es_.eigenvectors() * c);
    }

private:
    Eigen::VectorXd grad_;
    Eigen::MatrixXd hess_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_;
    Eigen::VectorXd coeffs_;
    bool ok_ = false;
};

struct Trajectory {
    Eigen::VectorXd x;
    double grad_norm = 0.0;
    bool converged = false;
};

Trajectory run_newton(const Objective& obj, const Eigen::VectorXd& x0, const Box& box, const Tolerances& tol,
                      const SolverOptions& opts) {
    constexpr double kLambdaMax = 1e30;
    const double escape = 1e3 * (1.0 + (box.hi - box.lo).cwiseAbs().maxCoeff());
    const Eigen::VectorXd center = box.center();

    Trajectory t{x0, 0.0, false};
    Evaluation cur = evaluate(obj, x0);
    if (!cur.finite) return t;
    double lambda = opts.lambda0;

    auto try_step = [&](const StepSolver& solver, double lam, Evaluation& next, Eigen::VectorXd& x_next) {
        x_next = t.x + solver.step(lam);
        if (!x_next.allFinite() || (x_next - center).cwiseAbs().maxCoeff() > escape) return false;
        next = evaluate(obj, x_next);
        return next.finite;
    };

    std::size_t it = 0;
    while (it < opts.max_iters && cur.grad_norm > tol.tau_grad) {
        const StepSolver solver(cur);
        bool accepted = false;
        while (it < opts.max_iters && lambda <= kLambdaMax) {
            ++it;
            Evaluation next;
            Eigen::VectorXd x_next;
            if (try_step(solver, lambda, next, x_next) && next.grad_norm < cur.grad_norm) {
                t.x = std::move(x_next);
                cur = std::move(next);
                lambda = std::max(lambda * 0.1, 1e-300);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
    }
    t.grad_norm = cur.grad_norm;
    t.converged = cur.grad_norm <= tol.tau_grad;
    if (!t.converged) return t;

    // Polish: keep stepping while the gradient norm strictly decreases.
    for (std::size_t p = 0; p < opts.polish_iters && cur.grad_norm > 0.0; ++p) {
        const StepSolver solver(cur);
        Evaluation next;
        Eigen::VectorXd x_next;
        if (!try_step(solver, lambda, next, x_next) || !(next.grad_norm < cur.grad_norm)) break;
        t.x = std::move(x_next);
        cur = std::move(next);
        lambda = std::max(lambda * 0.1, 1e-300);
    }
    t.grad_norm = cur.grad_norm;
    return t;
}

std::vector<unsigned> first_primes(std::size_t n) {
    std::vector<unsigned> primes;
    for (unsigned c = 2; primes.size() < n; ++c) {
        bool prime = true;
        for (unsigned p : primes) {
            if (p * p > c) break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(c);
    }
    return primes;
}

double radical_inverse(std::uint64_t i, unsigned base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

// Location rounded to 1e-12, compared lexicographically.
bool canonical_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double ra = std::round(a[i] * 1e12);
        const double rb = std::round(b[i] * 1e12);
        if (ra != rb) return ra < rb;
    }
    return false;
}

}  // namespace

CriticalPoint classify(const Objective& obj, const Eigen::VectorXd& point, const Tolerances& tol) {
    const Evaluation e = evaluate(obj, point);
    if (!e.finite) throw EvaluationError("classify: non-finite objective at the point");
    if (e.grad_norm > tol.tau_grad) {
        std::ostringstream msg;
        msg << "classify: gradient norm " << e.grad_norm << " exceeds tau_grad " << tol.tau_grad;
        throw PreconditionError(msg.str());
    }
    CriticalPoint cp;
    cp.location = point;
    cp.value = e.value;
    cp.grad_norm = e.grad_norm;
    fill_spectrum(cp, e.hess, tol.tau_deg);
    return cp;
}

std::vector<Eigen::VectorXd> start_points(const Box& box, std::size_t n, std::uint64_t seed) {
    const std::size_t d = box.dim();
    const std::vector<unsigned> primes = first_primes(d);
    std::mt19937_64 rng(seed);
    Eigen::VectorXd shift(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) shift[static_cast<Eigen::Index>(k)] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::vector<Eigen::VectorXd> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(d));
        for (std::size_t k = 0; k < d; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            double u = radical_inverse(i + 1, primes[k]) + shift[kk];
            u -= std::floor(u);
            x[kk] = box.lo[kk] + (box.hi[kk] - box.lo[kk]) * u;
        }
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<CriticalPoint> find_critical_points(const Objective& obj, const Box& box, std::size_t n_starts,
                                                const SolverOptions& opts) {
    if (n_starts == 0) throw InvalidInput("find_critical_points: need at least one start");
    if (box.dim() != obj.dim()) throw DimensionMismatch("find_critical_points: box dimension differs from objective");
    const Tolerances tol = resolve_tolerances(obj, box, opts);

    std::vector<Eigen::VectorXd> starts = opts.extra_starts;
    for (auto& s : start_points(box, n_starts, opts.seed)) starts.push_back(std::move(s));

    struct Candidate {
        Eigen::VectorXd x;
        double grad_norm;
        std::size_t start;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (static_cast<std::size_t>(starts[i].size()) != obj.dim()) throw DimensionMismatch("find_critical_points: extra start has wrong dimension");
        Trajectory t = run_newton(obj, starts[i], box, tol, opts);
        if (!t.converged || !box.contains(t.x, 1e-9)) continue;
        candidates.push_back({std::move(t.x), t.grad_norm, i});
    }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.grad_norm != b.grad_norm) return a.grad_norm < b.grad_norm;
        if (canonical_less(a.x, b.x)) return true;
        if (canonical_less(b.x, a.x)) return false;
        return a.start < b.start;
    });
    std::vector<Candidate> kept;
    for (Candidate& c : candidates) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Candidate& k) {
            return (k.x - c.x).norm() <= tol.dedupe_radius;
        });
        if (!dup) kept.push_back(std::move(c));
    }

    std::vector<CriticalPoint> points;
    points.reserve(kept.size());
    for (const Candidate& c : kept) {
        CriticalPoint cp = classify(obj, c.x, tol);
        cp.basin_start = c.start;
        points.push_back(std::move(cp));
    }
    std::sort(points.begin(), points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return canonical_less(a.location, b.location); });
    return points;
}

// ---------------------------------------------------------------------------

const char* verdict_name(NullTrace::Verdict v) {
    return v == NullTrace::Verdict::critical_curve ? "critical_curve" : "isolated";
}

namespace {

double point_segment_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (a + t * ab - p).norm();
}

// Continuation direction at y: the component of the secant inside the
// near-kernel of the Hessian, falling back to the smallest-|lambda| eigenvector.
Eigen::VectorXd next_direction(const Eigen::MatrixXd& hess, const Eigen::VectorXd& secant, double tau_deg) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    if (es.info() != Eigen::Success) return secant;
    const Eigen::VectorXd absw = es.eigenvalues().cwiseAbs();
    Eigen::Index best = 0;
    const double min_abs = absw.minCoeff(&best);
    const double thr = std::max(tau_deg * std::max(1.0, absw.maxCoeff()), min_abs);
    Eigen::VectorXd proj = Eigen::VectorXd::Zero(secant.size());
    for (Eigen::Index k = 0; k < absw.size(); ++k) {
        if (absw[k] <= thr) {
            const Eigen::VectorXd q = es.eigenvectors().col(k);
            proj += q.dot(secant) * q;
        }
    }
    if (proj.norm() < 0.1) {
        proj = es.eigenvectors().col(best);
        if (proj.dot(secant) < 0.0) proj = -proj;
    }
    return proj.normalized();
}

}  // namespace

NullTrace trace_null_direction(const Objective& obj, const CriticalPoint& point, double step, std::size_t n_steps,
                               const Tolerances& tol) {
    if (!point.degenerate) throw PreconditionError("trace_null_direction: point is not degenerate");
    if (!(step > 0.0)) throw InvalidInput("trace_null_direction: step must be positive");
    constexpr std::size_t kCorrectorIters = 50;

    NullTrace trace;
    Eigen::VectorXd x = point.location;
    Eigen::VectorXd v = point.null_direction().normalized();
    trace.samples.push_back(x);
    trace.max_grad_norm_along = point.grad_norm;
    bool truncated = false;
    const auto d = static_cast<Eigen::Index>(obj.dim());

    for (std::size_t k = 0; k < n_steps; ++k) {
        const Eigen::VectorXd pred = x + step * v;
        Eigen::VectorXd y = pred;
        Evaluation e;
        bool converged = false;
        for (std::size_t it = 0; it < kCorrectorIters; ++it) {
            e = evaluate(obj, y);
            if (!e.finite) break;
            if (e.grad_norm <= tol.tau_grad) {
                converged = true;
                break;
            }
            Eigen::MatrixXd a(d + 1, d);
            a.topRows(d) = e.hess;
            a.row(d) = v.transpose();
            Eigen::VectorXd b(d + 1);
            b.head(d) = -e.grad;
            b[d] = 0.0;
            const Eigen::VectorXd delta = a.completeOrthogonalDecomposition().solve(b);
            const Eigen::VectorXd y_next = y + delta;
            if (!y_next.allFinite() || (y_next - pred).norm() > step) break;
            if ((y_next - y).norm() <= 1e-15 * (1.0 + y.norm())) break;  // stalled
            y = y_next;
        }
        if (!converged) {
            std::ostringstream msg;
            msg << "corrector did not converge at step " << (k + 1) << " (|grad| = " << e.grad_norm << ")";
            trace.warning = msg.str();
            trace.max_grad_norm_along = std::max(trace.max_grad_norm_along, e.finite ? e.grad_norm : INFINITY);
            truncated = true;
            break;
        }
        const double sep = (y - x).norm();
        if (sep < 0.5 * step || sep > 1.5 * step) {
            trace.warning = "sample spacing left [0.5, 1.5] * step";
            truncated = true;
            break;
        }
        trace.arc_length += sep;
        trace.max_grad_norm_along = std::max(trace.max_grad_norm_along, e.grad_norm);
        v = next_direction(e.hess, (y - x) / sep, tol.tau_deg);
        x = y;
        trace.samples.push_back(x);
    }

    trace.closure_gap = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd& start = trace.samples.front();
    std::size_t first_far = trace.samples.size();
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
        if ((trace.samples[i] - start).norm() >= 4.0 * step) {
            first_far = i;
            break;
        }
    }
    for (std::size_t i = first_far; i + 1 < trace.samples.size(); ++i) {
        trace.closure_gap =
            std::min(trace.closure_gap, point_segment_distance(start, trace.samples[i], trace.samples[i + 1]));
    }

    trace.verdict = (!truncated && trace.max_grad_norm_along <= tol.tau_grad) ? NullTrace::Verdict::critical_curve
                                                                              : NullTrace::Verdict::isolated;
    return trace;
}

// ---------------------------------------------------------------------------

const char* verdict_name(MorseReport::Verdict v) {
    switch (v) {
        case MorseReport::Verdict::morse_evidence: return "morse_evidence";
        case MorseReport::Verdict::degenerate_found: return "degenerate_found";
        case MorseReport::Verdict::positive_dimensional_found: return "positive_dimensional_found";
    }
    return "unknown";
}

MorseReport morse_verdict(std::vector<CriticalPoint> points, std::vector<NullTrace> traces) {
    MorseReport r;
    r.vacuous = points.empty();
    const bool curve = std::any_of(traces.begin(), traces.end(),
                                   [](const NullTrace& t) { return t.verdict == NullTrace::Verdict::critical_curve; });
    const bool degenerate =
        std::any_of(points.begin(), points.end(), [](const CriticalPoint& p) { return p.degenerate || !p.classified; });
    if (curve) {
        r.verdict = MorseReport::Verdict::positive_dimensional_found;
    } else if (degenerate) {
        r.verdict = MorseReport::Verdict::degenerate_found;
    } else {
        r.verdict = MorseReport::Verdict::morse_evidence;
    }
    r.points = std::move(points);
    r.traces = std::move(traces);
    return r;
}

MorseReport analyze(const Objective& obj, const Box& box, const AnalyzeOptions& opts) {
    const Tolerances tol = resolve_tolerances(obj, box, opts.solver);
    SolverOptions solver = opts.solver;
    solver.tau_grad = tol.tau_grad;
    std::vector<CriticalPoint> points = find_critical_points(obj, box, opts.n_starts, solver);
    std::vector<NullTrace> traces;
    const double step = opts.trace_step > 0.0 ? opts.trace_step : 1e-2 * box.mean_half_width();
    for (const CriticalPoint& p : points) {
        if (traces.size() >= opts.max_traces) break;
        if (!p.degenerate || !p.classified) continue;
        traces.push_back(trace_null_direction(obj, p, step, opts.trace_steps, tol));
    }
    MorseReport r = morse_verdict(std::move(points), std::move(traces));
    r.tolerances = tol;
    r.starts = opts.n_starts;
    r.seed = opts.solver.seed;
    r.box = box;
    return r;
}

std::string critical_points_csv(const std::vector<CriticalPoint>& points, std::size_t dim) {
    std::ostringstream out;
    for (std::size_t i = 0; i < dim; ++i) out << "x_" << i << ',';
    out << "value,grad_norm,";
    for (std::size_t i = 0; i < dim; ++i) out << "lambda_" << i << ',';
    out << "min_abs_eig,index,degenerate\n";
    for (const CriticalPoint& p : points) {
        for (Eigen::Index i = 0; i < p.location.size(); ++i) out << format_double(p.location[i]) << ',';
        out << format_double(p.value) << ',' << format_double(p.grad_norm) << ',';
        for (std::size_t i = 0; i < dim; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            out << (p.classified && ii < p.eigenvalues.size() ? format_double(p.eigenvalues[ii]) : "nan") << ',';
        }
        out << format_double(p.min_abs_eig) << ',' << p.index << ',' << (p.degenerate ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace morselab
