#pragma once

// Feedforward networks with smooth activations, their flat parameter layout,
// and the unnormalized squared-error loss.
//
// Parameter ordering (frozen): affine maps in order M_1, b_1, M_2, b_2, ...;
// within a map the weight matrix comes first, row-major over the unmasked
// entries, followed by the bias vector. A 1-3-1 net is therefore laid out as
// (w_1, w_2, w_3, b_1, b_2, b_3, w_4, w_5, w_6, b_4).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "morselab/jet.hpp"

namespace morselab {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct FeedforwardSpec {
    std::vector<std::size_t> widths;  // a, k_1, ..., k_l, b
    std::vector<Mask> masks;          // empty: fully connected; else one per map, widths[k+1] x widths[k]
    ActivationKind activation;
    bool uses_bias = true;

    // l, the number of hidden layers.
    std::size_t depth() const { return widths.size() - 2; }
    // l + 1, the number of affine maps.
    std::size_t num_maps() const { return widths.size() - 1; }
    std::size_t input_width() const { return widths.front(); }
    std::size_t output_width() const { return widths.back(); }

    bool fully_connected() const;
    bool connected(std::size_t map, std::size_t row, std::size_t col) const;

    // Throws InvalidInput on fewer than two layers, a zero width, or a mask of
    // the wrong shape.
    void validate() const;
};

struct ParamEntry {
    std::size_t map;  // 0-based affine map index; map k holds M_{k+1}, b_{k+1}
    bool is_bias;
    std::size_t row;
    std::size_t col;  // 0 for biases
};

class ParamLayout {
public:
    explicit ParamLayout(const FeedforwardSpec& spec);

    std::size_t dim() const { return entries_.size(); }
    std::size_t num_maps() const { return weight_index_.size(); }
    const std::vector<ParamEntry>& entries() const { return entries_; }

    // -1 where the weight is masked out.
    const Eigen::MatrixXi& weight_indices(std::size_t map) const { return weight_index_.at(map); }
    // Empty when the network has no biases.
    const std::vector<std::size_t>& bias_indices(std::size_t map) const { return bias_index_.at(map); }

    std::vector<std::size_t> weight_coords(std::size_t map) const;

private:
    std::vector<ParamEntry> entries_;
    std::vector<Eigen::MatrixXi> weight_index_;
    std::vector<std::vector<std::size_t>> bias_index_;
};

struct NetworkParams {
    std::vector<Eigen::MatrixXd> weights;  // M_1 .. M_{l+1}
    std::vector<Eigen::VectorXd> biases;   // b_1 .. b_{l+1}; empty for bias-free nets
};

// Throws InvalidInput on a shape mismatch or a nonzero value in a masked entry.
Eigen::VectorXd pack(const NetworkParams& params, const FeedforwardSpec& spec);
NetworkParams unpack(std::span<const double> alpha, const FeedforwardSpec& spec);

struct Sample {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

struct DataSet {
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
    Eigen::VectorXd mean_target() const;
    void validate(const FeedforwardSpec& spec) const;
};

enum class LossKind { l2 };

// f_alpha(x): affine, sigma, affine, ..., sigma, affine.
template <class T>
std::vector<T> forward(const FeedforwardSpec& spec, const ParamLayout& layout, std::span<const T> params,
                       std::span<const double> x) {
    std::vector<T> h(x.begin(), x.end());
    for (std::size_t map = 0; map < spec.num_maps(); ++map) {
        const Eigen::MatrixXi& widx = layout.weight_indices(map);
        const std::vector<std::size_t>& bidx = layout.bias_indices(map);
        const bool last = map + 1 == spec.num_maps();
        std::vector<T> next;
        next.reserve(static_cast<std::size_t>(widx.rows()));
        for (Eigen::Index r = 0; r < widx.rows(); ++r) {
            T acc = bidx.empty() ? T(0.0) : params[bidx[static_cast<std::size_t>(r)]];
            for (Eigen::Index c = 0; c < widx.cols(); ++c) {
                const int k = widx(r, c);
                if (k >= 0) acc += params[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(c)];
            }
            next.push_back(last ? std::move(acc) : apply_activation(spec.activation, acc));
        }
        h = std::move(next);
    }
    return h;
}

// L(alpha) = sum_i |f_alpha(x_i) - y_i|^2, no 1/n and no 1/2.
template <class T>
T loss(const FeedforwardSpec& spec, const ParamLayout& layout, const DataSet& data, LossKind kind,
       std::span<const T> params) {
    (void)kind;  // only L2 is implemented
    T total(0.0);
    for (const Sample& s : data.samples) {
        const std::vector<T> out = forward<T>(spec, layout, params, {s.x.data(), static_cast<std::size_t>(s.x.size())});
        for (std::size_t j = 0; j < out.size(); ++j) {
            const T r = out[j] - s.y[static_cast<Eigen::Index>(j)];
            total += r * r;
        }
    }
    return total;
}

}  // namespace morselab
