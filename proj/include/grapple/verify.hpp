#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace grapple {

/// Default seed of every randomized check.
constexpr std::uint64_t kDefaultSeed = 1729;

// Negative bounds select the per-check default.
struct VerifyParams {
    std::string family = "dgc";
    int c = -1;
    int d = -1;
    int max_v = -1;
    int max_e = -1;
    int max_arity = -1;
    int n_max = -1;
    int max_edges = -1;
    int max_internal = -1;
    int samples = 12;
    int seeds = 100;
    std::uint64_t seed = kDefaultSeed;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    nlohmann::json witness;
};

const std::vector<std::string>& check_names();
/// Throws std::invalid_argument for an unknown check or family.
CheckResult run_check(const std::string& name, const VerifyParams& p);

nlohmann::json to_json(const CheckResult& r);

}  // namespace grapple
