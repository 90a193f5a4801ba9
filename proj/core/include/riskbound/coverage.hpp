#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "riskbound/concentration.hpp"
#include "riskbound/distributions.hpp"
#include "riskbound/estimators.hpp"
#include "riskbound/record.hpp"

namespace riskbound {

// Which bound the coverage harness validates per trial.
struct Theorem4Bound {};
struct SubGaussianBound {
    double sigma = 1.0;
};
struct SubExponentialBound {
    double sigma = 1.0;
    double b = 1.0;
};
struct PacBayesBound {
    int hypothesis_count = 1;
    double noise = 0.0;
    std::vector<double> beta_grid{0.0};
};
using BoundKind =
    std::variant<Theorem4Bound, SubGaussianBound, SubExponentialBound, PacBayesBound>;

std::string to_string(const BoundKind& kind);

struct CoverageOptions {
    // Debug multiplier applied to the computed upper bound before the
    // violation check. 1.0 leaves the bound untouched.
    double bound_scale = 1.0;
    // Replace the oracle-mean order-statistic term by its empirical upper
    // bound, splitting delta in half between the deviation machinery and the
    // mean estimate.
    bool empirical_mean_mode = false;
    int threads = 1;
};

struct CoverageReport {
    int trials = 0;
    int violations = 0;
    double violation_rate = 0.0;
    double threshold = 0.0;  // stated failure budget 2*delta
    double mean_slack = 0.0;  // average (bound - target) over non-violating trials
    std::uint64_t seed = 0;
};

// Repeated-trial validation of a bound's probabilistic guarantee: trial t
// draws n fresh samples from substream_seed(seed, t), computes the bound, and
// records a violation when the true value exceeds it. Results are
// deterministic in (seed, trials, params) and independent of thread count.
CoverageReport coverage_experiment(const DistributionSpec& spec, const RiskParams& params,
                                   const BoundKind& kind, int trials, std::uint64_t seed,
                                   const CoverageOptions& options = {});

// Empirical rate allowed before the experiment is declared failed:
// threshold plus three binomial standard errors.
double coverage_pass_threshold(const CoverageReport& report);

// One flat record per experiment, in the fixed CSV column order.
Record coverage_record(const DistributionSpec& spec, const RiskParams& params,
                       const BoundKind& kind, const CoverageReport& report);

}  // namespace riskbound
