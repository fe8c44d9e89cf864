#include "morselab/appendixlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "morselab/errors.hpp"
#include "morselab/report.hpp"

namespace morselab {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double t) {
    t = std::fmod(t + kPi, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    t -= kPi;
    return t >= kPi ? -kPi : t;
}

double angular_distance(double a, double b) {
    const double d = std::abs(wrap_angle(a - b));
    return std::min(d, 2.0 * kPi - d);
}

}  // namespace

void PolarFunction::validate() const {
    if (!f) throw InvalidInput("polar function is empty");
    if (!(rho_min > 0.0 && rho_min < rho_max)) throw InvalidInput("polar function needs 0 < rho_min < rho_max");
}

Objective PolarFunction::objective(RegularizerSpec reg) const {
    validate();
    return Objective::function(2, f, std::move(reg));
}

std::vector<JetCheckPoint> jet_condition_check(const PolarFunction& L, const JetCheckOptions& opts) {
    L.validate();
    if (opts.rho_samples == 0 || opts.theta_starts == 0) throw InvalidInput("jet check needs rho samples and theta starts");
    std::vector<JetCheckPoint> out;
    const std::vector<double> rhos =
        opts.rho_samples == 1 ? std::vector<double>{0.5 * (L.rho_min + L.rho_max)}
                              : linspace(L.rho_min, L.rho_max, opts.rho_samples);
    for (double rho : rhos) {
        std::vector<JetCheckPoint> found;
        for (std::size_t s = 0; s < opts.theta_starts; ++s) {
            double theta = -kPi + 2.0 * kPi * (static_cast<double>(s) + 0.5) / static_cast<double>(opts.theta_starts);
            bool converged = false;
            ScalarJet2 j;
            for (std::size_t it = 0; it <= opts.newton_iters; ++it) {
                const double pt[2] = {rho, theta};
                j = L.f(seed(pt));
                if (j.dim() == 0) j = ScalarJet2::constant(j.value(), 2);
                const double g = j.grad()[1];
                const double h = j.hess(1, 1);
                if (!std::isfinite(g) || !std::isfinite(h)) break;
                if (std::abs(g) <= opts.newton_tol * std::max(1.0, std::abs(j.value()))) {
                    converged = true;
                    break;
                }
                if (h == 0.0 || it == opts.newton_iters) break;
                theta -= std::clamp(g / h, -0.5 * kPi, 0.5 * kPi);
            }
            if (!converged) continue;
            theta = wrap_angle(theta);
            const bool dup = std::any_of(found.begin(), found.end(),
                                         [&](const JetCheckPoint& p) { return angular_distance(p.theta, theta) <= 1e-6; });
            if (dup) continue;
            JetCheckPoint p;
            p.rho = rho;
            p.theta = theta;
            p.d_theta = j.grad()[1];
            p.m_rho_theta = j.hess(0, 1);
            p.m_theta_theta = j.hess(1, 1);
            const double scale = std::max(1.0, j.hessian().cwiseAbs().maxCoeff());
            p.rank = std::hypot(p.m_rho_theta, p.m_theta_theta) > opts.rank_rel_tol * scale ? 1 : 0;
            p.passes = p.rank == 1;
            found.push_back(p);
        }
        std::sort(found.begin(), found.end(), [](const JetCheckPoint& a, const JetCheckPoint& b) { return a.theta < b.theta; });
        out.insert(out.end(), found.begin(), found.end());
    }
    return out;
}

MorseReport perturbed_polar_analysis(const PolarFunction& L, double eps, const AnalyzeOptions& opts) {
    L.validate();
    JetFunction base = L.f;
    JetFunction perturbed = [base, eps](std::span<const ScalarJet2> v) { return base(v) + eps * v[0]; };
    const Objective obj = Objective::function(2, std::move(perturbed));
    const Box box = Box::from_bounds(Eigen::Vector2d(L.rho_min, -kPi), Eigen::Vector2d(L.rho_max, kPi));
    return analyze(obj, box, opts);
}

// ---------------------------------------------------------------------------

std::vector<std::vector<unsigned>> monomial_exponents(std::size_t n, unsigned d) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> e(n, 0);
    for (unsigned total = 0; total <= d; ++total) {
        // Compositions of `total` into n parts, lexicographically descending.
        std::vector<std::vector<unsigned>> level;
        std::function<void(std::size_t, unsigned)> rec = [&](std::size_t v, unsigned left) {
            if (v + 1 == n) {
                e[v] = left;
                level.push_back(e);
                return;
            }
            for (unsigned k = left + 1; k-- > 0;) {
                e[v] = k;
                rec(v + 1, left - k);
            }
        };
        if (n == 0) break;
        rec(0, total);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

Polynomial::Polynomial(std::size_t n_vars, unsigned degree) : n_(n_vars), d_(degree) {
    if (n_vars == 0) throw InvalidInput("polynomial needs at least one variable");
    for (auto& e : monomial_exponents(n_vars, degree)) terms_.push_back({std::move(e), 0.0});
}

double& Polynomial::coeff(std::span<const unsigned> exponents) {
    if (exponents.size() != n_) throw DimensionMismatch("monomial exponent vector has the wrong length");
    for (Monomial& m : terms_) {
        if (std::equal(m.exponents.begin(), m.exponents.end(), exponents.begin())) return m.coeff;
    }
    throw InvalidInput("monomial exceeds the polynomial degree");
}

double Polynomial::coeff(std::span<const unsigned> exponents) const {
    return const_cast<Polynomial*>(this)->coeff(exponents);
}

Polynomial Polynomial::scaled(double a) const {
    Polynomial p = *this;
    for (Monomial& m : p.terms_) m.coeff *= a;
    return p;
}

JetFunction Polynomial::as_function() const {
    return [p = *this](std::span<const ScalarJet2> x) { return p.evaluate<ScalarJet2>(x); };
}

Polynomial random_polynomial(std::size_t n, unsigned d, std::uint64_t seed, double coeff_scale) {
    Polynomial p(n, d);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-coeff_scale, coeff_scale);
    for (const Monomial& m : p.terms()) p.coeff(m.exponents) = unif(rng);
    return p;
}

Polynomial radial_quartic_polynomial() {
    Polynomial p(2, 4);
    const unsigned x4[2] = {4, 0}, x2y2[2] = {2, 2}, y4[2] = {0, 4};
    p.coeff(x4) = -0.25;
    p.coeff(x2y2) = -0.5;
    p.coeff(y4) = -0.25;
    return p;
}

// ---------------------------------------------------------------------------

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw InvalidInput("linspace needs at least two points");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    v.back() = hi;
    return v;
}

namespace {

// Count of critical points and the multiset of raw Hessian indices (number of
// strictly negative eigenvalues). Invariant while no point degenerates.
std::vector<std::size_t> signature(const std::vector<CriticalPoint>& pts) {
    std::vector<std::size_t> s;
    for (const CriticalPoint& p : pts) {
        s.push_back(static_cast<std::size_t>((p.eigenvalues.array() < 0.0).count()));
    }
    std::sort(s.begin(), s.end());
    return s;
}

std::vector<Eigen::VectorXd> locations(const std::vector<CriticalPoint>& a, const std::vector<CriticalPoint>& b = {}) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& p : a) out.push_back(p.location);
    for (const auto& p : b) out.push_back(p.location);
    return out;
}

bool near_boundary(const Eigen::VectorXd& x, const Box& box, double margin) {
    const Eigen::ArrayXd pad = margin * (box.hi - box.lo).array();
    return ((x.array() - box.lo.array()) <= pad).any() || ((box.hi.array() - x.array()) <= pad).any();
}

// Whether the critical sets on the two sides of a tight bracket differ by more
// than points crossing the box boundary.
bool genuine_change(const std::vector<CriticalPoint>& a, const std::vector<CriticalPoint>& b, const Box& box,
                    double margin) {
    const double match_r = 1e-3 * (box.hi - box.lo).mean();
    std::vector<bool> used(b.size(), false);
    for (const CriticalPoint& p : a) {
        std::size_t best = b.size();
        double best_d = match_r;
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (used[k]) continue;
            const double dist = (b[k].location - p.location).norm();
            if (dist <= best_d) {
                best_d = dist;
                best = k;
            }
        }
        if (best == b.size()) {
            if (!near_boundary(p.location, box, margin)) return true;
            continue;
        }
        used[best] = true;
        const auto ia = (p.eigenvalues.array() < 0.0).count();
        const auto ib = (b[best].eigenvalues.array() < 0.0).count();
        if (ia != ib) return true;
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (!used[k] && !near_boundary(b[k].location, box, margin)) return true;
    }
    return false;
}

}  // namespace

BadSetEstimate scan_bad_eps(const Polynomial& L, std::span<const double> eps_grid, const Box& box,
                            const ScanOptions& opts) {
    if (L.n_vars() > 3) throw InvalidInput("scan_bad_eps: at most 3 variables");
    if (box.dim() != L.n_vars()) throw DimensionMismatch("scan_bad_eps: box dimension differs from the polynomial");
    if (eps_grid.size() < 16) throw InvalidInput("scan_bad_eps: eps grid needs at least 16 values");
    for (std::size_t i = 1; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > eps_grid[i - 1])) throw InvalidInput("scan_bad_eps: eps grid must be strictly increasing");
    }

    const Objective base = Objective::function(L.n_vars(), L.as_function());
    auto run = [&](double eps, std::vector<Eigen::VectorXd> seeds) {
        const Objective obj = base.with_regularizer(RegularizerSpec::standard_l2(0.5 * eps));
        SolverOptions so = opts.solver;
        so.extra_starts = std::move(seeds);
        return find_critical_points(obj, box, opts.n_starts, so);
    };

    BadSetEstimate est;
    est.n_starts = opts.n_starts;
    est.seed = opts.solver.seed;
    est.box = box;
    est.grid_resolution = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < eps_grid.size(); ++i) {
        est.grid_resolution = std::min(est.grid_resolution, eps_grid[i] - eps_grid[i - 1]);
    }

    const std::size_t n = eps_grid.size();
    std::vector<std::vector<CriticalPoint>> pts(n);
    std::vector<bool> degenerate(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = run(eps_grid[i], i > 0 ? locations(pts[i - 1]) : std::vector<Eigen::VectorXd>{});
        ScanRow row;
        row.eps = eps_grid[i];
        row.n_critical_points = pts[i].size();
        row.min_abs_eig = std::numeric_limits<double>::infinity();
        row.min_abs_det = std::numeric_limits<double>::infinity();
        for (const CriticalPoint& p : pts[i]) {
            row.min_abs_eig = std::min(row.min_abs_eig, p.min_abs_eig);
            row.min_abs_det = std::min(row.min_abs_det, std::abs(p.eigenvalues.prod()));
            row.degenerate_found = row.degenerate_found || p.degenerate || !p.classified;
        }
        degenerate[i] = row.degenerate_found;
        est.rows.push_back(row);
    }

    std::vector<bool> in_continuum(n, false);
    for (std::size_t i = 0; i < n;) {
        if (!degenerate[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && degenerate[j]) ++j;
        if (j - i >= opts.continuum_run) {
            est.continuum.emplace_back(eps_grid[i], eps_grid[j - 1]);
            for (std::size_t k = i; k < j; ++k) in_continuum[k] = true;
        }
        i = j;
    }

    std::vector<double> roots;
    std::size_t prev = n;  // last nondegenerate row
    for (std::size_t i = 0; i < n; ++i) {
        if (degenerate[i]) continue;
        if (prev != n) {
            bool blocked = false;
            for (std::size_t k = prev + 1; k < i; ++k) blocked = blocked || in_continuum[k];
            if (!blocked) {
                if (signature(pts[prev]) != signature(pts[i])) {
                    double a = eps_grid[prev], b = eps_grid[i];
                    std::vector<CriticalPoint> pa = pts[prev], pb = pts[i];
                    const std::vector<std::size_t> sa = signature(pa);
                    while (b - a > opts.bisect_tol) {
                        const double mid = 0.5 * (a + b);
                        if (mid <= a || mid >= b) break;
                        std::vector<CriticalPoint> pm = run(mid, locations(pa, pb));
                        if (signature(pm) == sa) {
                            a = mid;
                            pa = std::move(pm);
                        } else {
                            b = mid;
                            pb = std::move(pm);
                        }
                    }
                    if (genuine_change(pa, pb, box, opts.boundary_margin)) roots.push_back(0.5 * (a + b));
                } else {
                    // Degenerate grid values with matching neighbours: a touch, not a crossing.
                    for (std::size_t k = prev + 1; k < i; ++k) roots.push_back(eps_grid[k]);
                }
            }
        }
        prev = i;
    }

    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        if (est.isolated_bad_eps.empty() || r - est.isolated_bad_eps.back() > est.grid_resolution) {
            est.isolated_bad_eps.push_back(r);
        }
    }
    return est;
}

std::string scan_csv(const BadSetEstimate& est) {
    std::ostringstream out;
    out << "eps,n_critical_points,min_abs_eig_over_points,degenerate_found\n";
    for (const ScanRow& r : est.rows) {
        out << format_double(r.eps) << ',' << r.n_critical_points << ',' << format_double(r.min_abs_eig) << ','
            << (r.degenerate_found ? 1 : 0) << '\n';
    }
    return out.str();
}

nlohmann::json to_json(const BadSetEstimate& est) {
    nlohmann::json j;
    j["isolated_bad_eps"] = est.isolated_bad_eps;
    nlohmann::json cont = nlohmann::json::array();
    for (const auto& [lo, hi] : est.continuum) cont.push_back({lo, hi});
    j["continuum"] = cont;
    j["grid_resolution"] = est.grid_resolution;
    j["grid_size"] = est.rows.size();
    j["n_starts"] = est.n_starts;
    j["seed"] = est.seed;
    j["box"] = {{"lo", std::vector<double>(est.box.lo.begin(), est.box.lo.end())},
                {"hi", std::vector<double>(est.box.hi.begin(), est.box.hi.end())}};
    return j;
}

}  // namespace morselab
