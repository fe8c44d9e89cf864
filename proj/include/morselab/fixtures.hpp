#pragma once

// Networks and datasets used by verify-paper and the tests. The JSON files
// under fixtures/ hold the same documents.

#include "morselab/network_json.hpp"

namespace morselab::fixtures {

// Inputs -1, -0.5, 0, 0.5, 1.
std::vector<double> sample_inputs();

// 1-3-1, sigma(u) = u^2 + 1, five samples; d = 10.
NetworkDocument square_plus_one_131();

// 1-2-2-1 with the given activation (identity by default) on y = 2x; d = 13.
NetworkDocument linear_1221(ActivationKind activation = ActivationKind::identity());

// tanh net of the given depth with all hidden widths 2, with biases.
NetworkDocument tanh_deep(std::size_t depth);

// 1-2-2-1 tanh without biases.
NetworkDocument tanh_shallow_no_bias();

}  // namespace morselab::fixtures
