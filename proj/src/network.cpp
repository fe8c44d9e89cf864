#include "morselab/network.hpp"

#include <string>

#include "morselab/errors.hpp"

namespace morselab {

bool FeedforwardSpec::fully_connected() const {
    for (const Mask& m : masks) {
        if (!m.all()) return false;
    }
    return true;
}

bool FeedforwardSpec::connected(std::size_t map, std::size_t row, std::size_t col) const {
    if (masks.empty()) return true;
    return masks[map](static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

void FeedforwardSpec::validate() const {
    if (widths.size() < 2) throw InvalidInput("network needs at least input and output layers");
    for (std::size_t w : widths) {
        if (w == 0) throw InvalidInput("layer widths must be >= 1");
    }
    if (!masks.empty()) {
        if (masks.size() != num_maps()) throw InvalidInput("mask count must equal the number of affine maps");
        for (std::size_t k = 0; k < masks.size(); ++k) {
            if (static_cast<std::size_t>(masks[k].rows()) != widths[k + 1] ||
                static_cast<std::size_t>(masks[k].cols()) != widths[k]) {
                throw InvalidInput("mask " + std::to_string(k) + " has the wrong shape");
            }
        }
    }
}

ParamLayout::ParamLayout(const FeedforwardSpec& spec) {
    spec.validate();
    for (std::size_t map = 0; map < spec.num_maps(); ++map) {
        const auto rows = static_cast<Eigen::Index>(spec.widths[map + 1]);
        const auto cols = static_cast<Eigen::Index>(spec.widths[map]);
        Eigen::MatrixXi widx = Eigen::MatrixXi::Constant(rows, cols, -1);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                if (!spec.connected(map, static_cast<std::size_t>(r), static_cast<std::size_t>(c))) continue;
                widx(r, c) = static_cast<int>(entries_.size());
                entries_.push_back({map, false, static_cast<std::size_t>(r), static_cast<std::size_t>(c)});
            }
        }
        weight_index_.push_back(std::move(widx));
        std::vector<std::size_t> bidx;
        if (spec.uses_bias) {
            for (Eigen::Index r = 0; r < rows; ++r) {
                bidx.push_back(entries_.size());
                entries_.push_back({map, true, static_cast<std::size_t>(r), 0});
            }
        }
        bias_index_.push_back(std::move(bidx));
    }
}

std::vector<std::size_t> ParamLayout::weight_coords(std::size_t map) const {
    std::vector<std::size_t> out;
    const Eigen::MatrixXi& widx = weight_index_.at(map);
    for (Eigen::Index r = 0; r < widx.rows(); ++r) {
        for (Eigen::Index c = 0; c < widx.cols(); ++c) {
            if (widx(r, c) >= 0) out.push_back(static_cast<std::size_t>(widx(r, c)));
        }
    }
    return out;
}

Eigen::VectorXd pack(const NetworkParams& params, const FeedforwardSpec& spec) {
    const ParamLayout layout(spec);
    if (params.weights.size() != spec.num_maps()) throw InvalidInput("pack: wrong number of weight matrices");
    const bool has_bias_input = !params.biases.empty();
    if (has_bias_input && params.biases.size() != spec.num_maps()) {
        throw InvalidInput("pack: wrong number of bias vectors");
    }
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.dim()));
    for (std::size_t map = 0; map < spec.num_maps(); ++map) {
        const Eigen::MatrixXd& m = params.weights[map];
        const Eigen::MatrixXi& widx = layout.weight_indices(map);
        if (m.rows() != widx.rows() || m.cols() != widx.cols()) {
            throw InvalidInput("pack: weight matrix " + std::to_string(map + 1) + " has the wrong shape");
        }
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if (widx(r, c) >= 0) {
                    alpha[widx(r, c)] = m(r, c);
                } else if (m(r, c) != 0.0) {
                    throw InvalidInput("pack: nonzero value for a masked weight");
                }
            }
        }
        if (!has_bias_input) continue;
        const Eigen::VectorXd& b = params.biases[map];
        if (b.size() != widx.rows()) {
            throw InvalidInput("pack: bias vector " + std::to_string(map + 1) + " has the wrong shape");
        }
        const auto& bidx = layout.bias_indices(map);
        if (bidx.empty()) {
            if (!b.isZero(0.0)) throw InvalidInput("pack: nonzero bias for a bias-free network");
            continue;
        }
        for (Eigen::Index r = 0; r < b.size(); ++r) alpha[static_cast<Eigen::Index>(bidx[static_cast<std::size_t>(r)])] = b[r];
    }
    return alpha;
}

NetworkParams unpack(std::span<const double> alpha, const FeedforwardSpec& spec) {
    const ParamLayout layout(spec);
    if (alpha.size() != layout.dim()) throw DimensionMismatch("unpack: parameter vector has the wrong length");
    NetworkParams out;
    for (std::size_t map = 0; map < spec.num_maps(); ++map) {
        const Eigen::MatrixXi& widx = layout.weight_indices(map);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(widx.rows(), widx.cols());
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if (widx(r, c) >= 0) m(r, c) = alpha[static_cast<std::size_t>(widx(r, c))];
            }
        }
        out.weights.push_back(std::move(m));
        const auto& bidx = layout.bias_indices(map);
        if (!bidx.empty()) {
            Eigen::VectorXd b(static_cast<Eigen::Index>(bidx.size()));
            for (std::size_t r = 0; r < bidx.size(); ++r) b[static_cast<Eigen::Index>(r)] = alpha[bidx[r]];
            out.biases.push_back(std::move(b));
        }
    }
    return out;
}

Eigen::VectorXd DataSet::mean_target() const {
    if (samples.empty()) throw InvalidInput("dataset is empty");
    Eigen::VectorXd m = Eigen::VectorXd::Zero(samples.front().y.size());
    for (const Sample& s : samples) m += s.y;
    return m / static_cast<double>(samples.size());
}

void DataSet::validate(const FeedforwardSpec& spec) const {
    if (samples.empty()) throw InvalidInput("dataset must contain at least one pair");
    for (const Sample& s : samples) {
        if (static_cast<std::size_t>(s.x.size()) != spec.input_width()) {
            throw DimensionMismatch("dataset input length does not match the input width");
        }
        if (static_cast<std::size_t>(s.y.size()) != spec.output_width()) {
            throw DimensionMismatch("dataset target length does not match the output width");
        }
    }
}

}  // namespace morselab
