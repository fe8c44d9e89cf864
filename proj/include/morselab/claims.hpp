#pragma once

// The claim matrix behind `morselab verify-paper`. Each claim id names one
// numerically checkable statement about a bundled fixture; running it yields
// measurements, the tolerances they were judged against, and a status.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace morselab {

struct ClaimResult {
    enum class Status { pass, fail, skipped };

    std::string id;
    std::string statement;
    Status status = Status::skipped;
    nlohmann::json measurements = nlohmann::json::object();
    nlohmann::json tolerances = nlohmann::json::object();
};

const char* status_name(ClaimResult::Status s);

// Fixed registry, in report order.
const std::vector<std::string>& claim_registry();

// Throws InvalidInput for an unknown id.
ClaimResult run_claim(const std::string& id, std::uint64_t seed);

// Runs the listed claims; every other registered id is reported as skipped.
// An empty list runs them all.
std::vector<ClaimResult> verify_claims(std::uint64_t seed, const std::vector<std::string>& only = {});

nlohmann::json claim_matrix_json(const std::vector<ClaimResult>& results, std::uint64_t seed);

// Individual claims, exposed for the acceptance suite.
ClaimResult claim_generic_l2_morse(std::uint64_t seed);
ClaimResult claim_radial_circle(std::uint64_t seed);
ClaimResult claim_linear_orbit(std::uint64_t seed);
ClaimResult claim_layer_invariance(std::uint64_t seed);
ClaimResult claim_core_locus(std::uint64_t seed);
ClaimResult claim_origin_flat(std::uint64_t seed);
ClaimResult claim_polar_rank(std::uint64_t seed);
ClaimResult claim_polynomial_bad_set(std::uint64_t seed);

}  // namespace morselab
