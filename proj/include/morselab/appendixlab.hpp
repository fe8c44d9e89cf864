#pragma once

// Two checks on perturbations of a fixed function.
//
// Polar rank condition (two variables). For L(rho, theta) on rho > 0, at every
// point with dL/dtheta = 0 the 1x2 matrix (d2L/drho dtheta, d2L/dtheta2) should
// have rank 1. When it does everywhere, L + eps * rho is expected to be Morse
// for almost every eps.
//
// Bad-eps scan (polynomials). For L in n <= 3 variables and
// L_eps = L + 1/2 eps |x|^2, estimate the set of eps where L_eps has a
// degenerate critical point: isolated values found by bisection on changes in
// the critical-point signature, and continuum intervals where degenerate
// points persist across consecutive grid values.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "morselab/critfind.hpp"
#include "morselab/jet.hpp"
#include "morselab/regularizers.hpp"

namespace morselab {

// ---------------------------------------------------------------------------
// Polar rank condition

struct PolarFunction {
    JetFunction f;  // arguments (rho, theta)
    double rho_min = 0.5;
    double rho_max = 2.0;

    // Throws InvalidInput unless 0 < rho_min < rho_max and f is set.
    void validate() const;
    Objective objective(RegularizerSpec reg = RegularizerSpec::none()) const;
};

struct JetCheckOptions {
    std::size_t rho_samples = 16;
    std::size_t theta_starts = 16;
    double rank_rel_tol = 1e-8;
    double newton_tol = 1e-12;
    std::size_t newton_iters = 60;
};

struct JetCheckPoint {
    double rho = 0.0;
    double theta = 0.0;  // in [-pi, pi)
    double d_theta = 0.0;
    double m_rho_theta = 0.0;
    double m_theta_theta = 0.0;
    std::size_t rank = 0;
    bool passes = false;
};

// Points with dL/dtheta = 0 at sampled rho and their rank verdicts. An empty
// result means the condition holds vacuously.
std::vector<JetCheckPoint> jet_condition_check(const PolarFunction& L, const JetCheckOptions& opts = {});

// L + eps * rho on [rho_min, rho_max] x [-pi, pi].
MorseReport perturbed_polar_analysis(const PolarFunction& L, double eps, const AnalyzeOptions& opts);

// ---------------------------------------------------------------------------
// Polynomials

struct Monomial {
    std::vector<unsigned> exponents;
    double coeff = 0.0;
};

class Polynomial {
public:
    Polynomial(std::size_t n_vars, unsigned degree);

    std::size_t n_vars() const { return n_; }
    unsigned degree() const { return d_; }
    // Graded order: total degree ascending, then exponents descending
    // lexicographically (1, x, y, x^2, xy, y^2, ...).
    const std::vector<Monomial>& terms() const { return terms_; }
    double& coeff(std::span<const unsigned> exponents);
    double coeff(std::span<const unsigned> exponents) const;

    template <class T>
    T evaluate(std::span<const T> x) const;

    Polynomial scaled(double a) const;
    JetFunction as_function() const;

private:
    std::size_t n_;
    unsigned d_;
    std::vector<Monomial> terms_;
};

// Exponent vectors of total degree <= d in graded order.
std::vector<std::vector<unsigned>> monomial_exponents(std::size_t n, unsigned d);

// Coefficients i.i.d. uniform on [-coeff_scale, coeff_scale], in graded order.
Polynomial random_polynomial(std::size_t n, unsigned d, std::uint64_t seed, double coeff_scale = 1.0);

// -1/4 (x^2 + y^2)^2.
Polynomial radial_quartic_polynomial();

// ---------------------------------------------------------------------------
// Bad-eps scan

struct ScanOptions {
    std::size_t n_starts = 32;
    SolverOptions solver;
    double bisect_tol = 1e-9;
    std::size_t continuum_run = 3;
    // Points within this fraction of the box width from its boundary may enter
    // or leave the box; a signature change caused only by them is ignored.
    double boundary_margin = 1e-3;
};

struct ScanRow {
    double eps = 0.0;
    std::size_t n_critical_points = 0;
    double min_abs_eig = 0.0;  // over accepted points; +inf when none
    double min_abs_det = 0.0;  // min |det(Hess L + eps I)|; +inf when none
    bool degenerate_found = false;
};

struct BadSetEstimate {
    std::vector<double> isolated_bad_eps;
    std::vector<std::pair<double, double>> continuum;
    std::vector<ScanRow> rows;
    double grid_resolution = 0.0;  // smallest grid spacing
    std::size_t n_starts = 0;
    std::uint64_t seed = 0;
    Box box;
};

// Throws InvalidInput for an unsorted grid, fewer than 16 grid values, or
// more than 3 variables.
BadSetEstimate scan_bad_eps(const Polynomial& L, std::span<const double> eps_grid, const Box& box,
                            const ScanOptions& opts = {});

std::vector<double> linspace(double lo, double hi, std::size_t n);

// Columns: eps, n_critical_points, min_abs_eig_over_points, degenerate_found.
std::string scan_csv(const BadSetEstimate& est);
nlohmann::json to_json(const BadSetEstimate& est);

// ---------------------------------------------------------------------------

template <class T>
T Polynomial::evaluate(std::span<const T> x) const {
    // powers[v][e] = x_v^e
    std::vector<std::vector<T>> powers(n_);
    for (std::size_t v = 0; v < n_; ++v) {
        powers[v].reserve(d_ + 1);
        powers[v].push_back(T(1.0));
        for (unsigned e = 1; e <= d_; ++e) powers[v].push_back(powers[v].back() * x[v]);
    }
    T total(0.0);
    for (const Monomial& m : terms_) {
        if (m.coeff == 0.0) continue;
        T term(m.coeff);
        for (std::size_t v = 0; v < n_; ++v) {
            if (m.exponents[v] > 0) term = term * powers[v][m.exponents[v]];
        }
        total += term;
    }
    return total;
}

}  // namespace morselab
