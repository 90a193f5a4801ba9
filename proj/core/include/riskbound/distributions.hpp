#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "riskbound/rng.hpp"

namespace riskbound {

// Synthetic distribution catalog. Every family supports deterministic
// inverse-CDF sampling, an exact mean, and a true-CVaR oracle.
struct Constant {
    double c = 0.0;
};
struct Bernoulli {
    double p = 0.0;
};
struct Uniform01 {};
struct Normal {
    double mu = 0.0;
    double sigma = 1.0;
};
struct Exponential {
    double rate = 1.0;
};
struct DiscreteAtoms {
    std::vector<double> values;
    std::vector<double> probs;
};

class DistributionSpec {
public:
    using Family =
        std::variant<Constant, Bernoulli, Uniform01, Normal, Exponential, DiscreteAtoms>;

    explicit DistributionSpec(Family family);

    const Family& family() const { return family_; }

    double sample(SplitMix64& rng) const;
    void sample_n(SplitMix64& rng, int n, std::vector<double>& out) const;
    double mean() const;
    // True iff the support is contained in [0,1].
    bool support_in_unit_interval() const;

private:
    Family family_;
};

// Closed-form CVaR at level alpha.
double true_cvar(const DistributionSpec& spec, double alpha);

// Independent route to the same value: minimizes mu + E[Z - mu]_+ / alpha by
// golden-section search, with the partial expectation computed by adaptive
// quadrature (continuous families) or exact summation (discrete ones).
// Absolute accuracy around 1e-9.
double numeric_cvar_oracle(const DistributionSpec& spec, double alpha);

// Density (w.r.t. the atom probabilities) attaining the CVaR supremum over
// the envelope q <= 1/alpha: the cap above the (1-alpha)-quantile, a
// fractional value on the quantile atoms, zero below.
struct DualDensity {
    std::vector<double> atom_values;
    std::vector<double> density_values;
};

DualDensity dual_density_discrete(const DiscreteAtoms& atoms, double alpha);

// |E[Z * q(Z)] - true CVaR| for the constructed dual density; identically
// zero up to roundoff.
double dual_mean_gap(const DiscreteAtoms& atoms, double alpha);

// Sampled check of the MGF bound E[exp(eta * Y)] <= 2*exp(eta^2 sigma^2/(2 alpha^2))
// for the reweighted variable Y = Z * q(Z), on a centered sigma-sub-Gaussian
// discrete spec. A sanity check with a standard-error band, not a proof.
struct MgfCheckPoint {
    double eta = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
    bool within_band = false;  // estimate <= bound + 3 * std_error
};
struct MgfReport {
    std::vector<MgfCheckPoint> points;
    int sample_count = 0;
    std::uint64_t seed = 0;
};

MgfReport check_reweighted_mgf(const DiscreteAtoms& atoms, double alpha, double sigma,
                               const std::vector<double>& etas, int sample_count,
                               std::uint64_t seed);

// Textual descriptor, e.g. "uniform01", "normal:0,1", "discrete:0@0.9,1@0.1".
// parse_distribution_spec accepts exactly what to_string produces.
std::string to_string(const DistributionSpec& spec);
DistributionSpec parse_distribution_spec(const std::string& text);

}  // namespace riskbound
