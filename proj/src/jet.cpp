#include "morselab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "morselab/errors.hpp"
#include "morselab/simd/kernels.hpp"

namespace morselab {

using simd::active_kernels;
using simd::packed_index;
using simd::packed_size;

ScalarJet2 ScalarJet2::constant(double value, std::size_t dim) {
    ScalarJet2 j;
    j.value_ = value;
    j.dim_ = dim;
    j.buf_.assign(dim + packed_size(dim), 0.0);
    return j;
}

ScalarJet2 ScalarJet2::variable(double value, std::size_t index, std::size_t dim) {
    if (index >= dim) throw InvalidInput("seed index out of range");
    ScalarJet2 j = constant(value, dim);
    j.buf_[index] = 1.0;
    return j;
}

double ScalarJet2::hess(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) throw InvalidInput("Hessian index out of range");
    if (i > j) std::swap(i, j);
    return buf_[dim_ + packed_index(i, j, dim_)];
}

Eigen::VectorXd ScalarJet2::gradient() const {
    Eigen::VectorXd g(static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < dim_; ++i) g[static_cast<Eigen::Index>(i)] = buf_[i];
    return g;
}

Eigen::MatrixXd ScalarJet2::hessian() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd h(n, n);
    std::size_t k = dim_;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j, ++k) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            h(ii, jj) = buf_[k];
            h(jj, ii) = buf_[k];
        }
    }
    return h;
}

namespace {

std::size_t common_dim(const ScalarJet2& a, const ScalarJet2& b) {
    if (a.dim() != 0 && b.dim() != 0 && a.dim() != b.dim()) {
        throw DimensionMismatch("jet dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
    }
    return std::max(a.dim(), b.dim());
}

}  // namespace

ScalarJet2 ScalarJet2::operator-() const {
    ScalarJet2 r = *this;
    r.value_ = -value_;
    for (double& x : r.buf_) x = -x;
    return r;
}

ScalarJet2& ScalarJet2::operator+=(const ScalarJet2& rhs) {
    const std::size_t d = common_dim(*this, rhs);
    value_ += rhs.value_;
    if (rhs.dim_ == 0) return *this;
    if (dim_ == 0) {
        dim_ = d;
        buf_ = rhs.buf_;
        return *this;
    }
    active_kernels().axpby(1.0, buf_.data(), 1.0, rhs.buf_.data(), buf_.data(), buf_.size());
    return *this;
}

ScalarJet2& ScalarJet2::operator-=(const ScalarJet2& rhs) {
    const std::size_t d = common_dim(*this, rhs);
    value_ -= rhs.value_;
    if (rhs.dim_ == 0) return *this;
    if (dim_ == 0) {
        dim_ = d;
        buf_.resize(rhs.buf_.size());
        active_kernels().scale(-1.0, rhs.buf_.data(), buf_.data(), buf_.size());
        return *this;
    }
    active_kernels().axpby(1.0, buf_.data(), -1.0, rhs.buf_.data(), buf_.data(), buf_.size());
    return *this;
}

ScalarJet2& ScalarJet2::operator*=(const ScalarJet2& rhs) {
    *this = *this * rhs;
    return *this;
}

ScalarJet2& ScalarJet2::operator/=(const ScalarJet2& rhs) {
    *this = *this / rhs;
    return *this;
}

ScalarJet2& ScalarJet2::operator+=(double rhs) {
    value_ += rhs;
    return *this;
}

ScalarJet2& ScalarJet2::operator-=(double rhs) {
    value_ -= rhs;
    return *this;
}

ScalarJet2& ScalarJet2::operator*=(double rhs) {
    value_ *= rhs;
    if (!buf_.empty()) active_kernels().scale(rhs, buf_.data(), buf_.data(), buf_.size());
    return *this;
}

ScalarJet2& ScalarJet2::operator/=(double rhs) {
    if (rhs == 0.0) throw std::domain_error("jet division by zero");
    value_ /= rhs;
    for (double& x : buf_) x /= rhs;
    return *this;
}

ScalarJet2 ScalarJet2::compose(const ScalarJet2& u, double f0, double f1, double f2) {
    ScalarJet2 r;
    r.value_ = f0;
    r.dim_ = u.dim_;
    if (u.dim_ == 0) return r;
    r.buf_.resize(u.buf_.size());
    const auto& k = active_kernels();
    k.scale(f1, u.buf_.data(), r.buf_.data(), u.buf_.size());
    k.sym_rank1(f2, u.buf_.data(), r.buf_.data() + u.dim_, u.dim_);
    return r;
}

ScalarJet2 operator+(ScalarJet2 a, const ScalarJet2& b) { return a += b; }
ScalarJet2 operator-(ScalarJet2 a, const ScalarJet2& b) { return a -= b; }

ScalarJet2 operator*(const ScalarJet2& a, const ScalarJet2& b) {
    const std::size_t d = common_dim(a, b);
    if (a.dim() == 0) return b * a.value();
    if (b.dim() == 0) return a * b.value();
    // (ab)'' = a b'' + b a'' + a' b'^T + b' a'^T
    ScalarJet2 r = ScalarJet2::constant(a.value() * b.value(), d);
    const auto& k = active_kernels();
    const std::size_t n = d + packed_size(d);
    double* out = r.buf_.data();
    k.axpby(a.value(), b.grad().data(), b.value(), a.grad().data(), out, n);
    k.sym_rank2(1.0, a.grad().data(), b.grad().data(), out + d, d);
    return r;
}

ScalarJet2 operator/(const ScalarJet2& a, const ScalarJet2& b) {
    const double v = b.value();
    if (v == 0.0) throw std::domain_error("jet division by zero");
    if (b.dim() == 0) return a / v;
    const double inv = 1.0 / v;
    return a * ScalarJet2::compose(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

ScalarJet2 operator+(ScalarJet2 a, double b) { return a += b; }
ScalarJet2 operator+(double a, ScalarJet2 b) { return b += a; }
ScalarJet2 operator-(ScalarJet2 a, double b) { return a -= b; }
ScalarJet2 operator-(double a, const ScalarJet2& b) { return -b + a; }
ScalarJet2 operator*(ScalarJet2 a, double b) { return a *= b; }
ScalarJet2 operator*(double a, ScalarJet2 b) { return b *= a; }
ScalarJet2 operator/(ScalarJet2 a, double b) { return a /= b; }
ScalarJet2 operator/(double a, const ScalarJet2& b) { return ScalarJet2(a) / b; }

ScalarJet2 square(const ScalarJet2& u) {
    const double v = u.value();
    return ScalarJet2::compose(u, v * v, 2.0 * v, 2.0);
}

ScalarJet2 sqrt(const ScalarJet2& u) {
    const double s = std::sqrt(u.value());
    return ScalarJet2::compose(u, s, 0.5 / s, -0.25 / (s * s * s));
}

ScalarJet2 exp(const ScalarJet2& u) {
    const double e = std::exp(u.value());
    return ScalarJet2::compose(u, e, e, e);
}

ScalarJet2 log(const ScalarJet2& u) {
    const double v = u.value();
    return ScalarJet2::compose(u, std::log(v), 1.0 / v, -1.0 / (v * v));
}

ScalarJet2 sin(const ScalarJet2& u) {
    const double s = std::sin(u.value());
    return ScalarJet2::compose(u, s, std::cos(u.value()), -s);
}

ScalarJet2 cos(const ScalarJet2& u) {
    const double c = std::cos(u.value());
    return ScalarJet2::compose(u, c, -std::sin(u.value()), -c);
}

ScalarJet2 tanh(const ScalarJet2& u) { return apply_activation(ActivationKind::tanh(), u); }

std::vector<ScalarJet2> seed(std::span<const double> point) {
    if (point.empty()) throw InvalidInput("seed: empty point");
    std::vector<ScalarJet2> out;
    out.reserve(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) out.push_back(ScalarJet2::variable(point[i], i, point.size()));
    return out;
}

std::vector<ScalarJet2> constants(std::span<const double> point) {
    return {point.begin(), point.end()};
}

// ---------------------------------------------------------------------------

namespace {

double logistic(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    const double e = std::exp(u);
    return e / (1.0 + e);
}

}  // namespace

ActivationDerivs activation_derivs(const ActivationKind& kind, double u) {
    using Tag = ActivationKind::Tag;
    switch (kind.tag) {
        case Tag::identity: return {u, 1.0, 0.0};
        case Tag::tanh: {
            const double t = std::tanh(u);
            const double s = 1.0 - t * t;
            return {t, s, -2.0 * t * s};
        }
        case Tag::sigmoid: {
            const double s = logistic(u);
            const double ds = s * (1.0 - s);
            return {s, ds, ds * (1.0 - 2.0 * s)};
        }
        case Tag::softplus: {
            // log(1 + e^u) = max(u, 0) + log1p(e^{-|u|})
            const double s = logistic(u);
            return {std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))), s, s * (1.0 - s)};
        }
        case Tag::square_plus_one: return {u * u + 1.0, 2.0 * u, 2.0};
        case Tag::polynomial: {
            double v = 0.0, d1 = 0.0, d2 = 0.0;
            for (auto c = kind.coeffs.rbegin(); c != kind.coeffs.rend(); ++c) {
                d2 = d2 * u + 2.0 * d1;
                d1 = d1 * u + v;
                v = v * u + *c;
            }
            return {v, d1, d2};
        }
    }
    throw InvalidInput("unknown activation");
}

double apply_activation(const ActivationKind& kind, double u) { return activation_derivs(kind, u).value; }

ScalarJet2 apply_activation(const ActivationKind& kind, const ScalarJet2& u) {
    if (kind.tag == ActivationKind::Tag::identity) return u;
    const ActivationDerivs d = activation_derivs(kind, u.value());
    return ScalarJet2::compose(u, d.value, d.first, d.second);
}

const char* activation_name(ActivationKind::Tag tag) {
    using Tag = ActivationKind::Tag;
    switch (tag) {
        case Tag::identity: return "identity";
        case Tag::tanh: return "tanh";
        case Tag::sigmoid: return "sigmoid";
        case Tag::softplus: return "softplus";
        case Tag::square_plus_one: return "square_plus_one";
        case Tag::polynomial: return "polynomial";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

FiniteDifferenceReport finite_difference_check(const JetFunction& f, std::span<const double> point, double h) {
    if (!(h > 0.0)) throw InvalidInput("finite_difference_check: step must be positive");
    const std::size_t d = point.size();
    const ScalarJet2 jet = f(seed(point));
    if (jet.dim() != d) throw DimensionMismatch("finite_difference_check: function returned wrong jet dimension");

    std::vector<double> x(point.begin(), point.end());
    auto eval = [&](const std::vector<double>& p) {
        const double v = f(constants(p)).value();
        if (!std::isfinite(v)) throw EvaluationError("finite_difference_check: non-finite value on stencil");
        return v;
    };
    auto shifted = [&](std::size_t i, double si, std::size_t j, double sj) {
        std::vector<double> p = x;
        p[i] += si;
        p[j] += sj;
        return eval(p);
    };

    FiniteDifferenceReport rep;
    const double f0 = eval(x);
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t i = 0; i < d; ++i) {
        const double fp = shifted(i, h, i, 0.0);
        const double fm = shifted(i, -h, i, 0.0);
        const double g = (fp - fm) / (2.0 * h);
        const double hii = (fp - 2.0 * f0 + fm) * inv_h2;
        rep.max_grad_err = std::max(rep.max_grad_err, std::abs(g - jet.grad()[i]));
        rep.max_hess_err = std::max(rep.max_hess_err, std::abs(hii - jet.hess(i, i)));
        for (std::size_t j = i + 1; j < d; ++j) {
            const double fpp = shifted(i, h, j, h);
            const double fpm = shifted(i, h, j, -h);
            const double fmp = shifted(i, -h, j, h);
            const double fmm = shifted(i, -h, j, -h);
            const double hij = (fpp - fpm - fmp + fmm) * (0.25 * inv_h2);
            rep.max_hess_err = std::max(rep.max_hess_err, std::abs(hij - jet.hess(i, j)));
        }
    }
    rep.grad_norm = jet.gradient().norm();
    rep.hess_norm = jet.hessian().norm();
    return rep;
}

}  // namespace morselab
