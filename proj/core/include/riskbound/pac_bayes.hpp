#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "riskbound/estimators.hpp"
#include "riskbound/samples.hpp"

namespace riskbound {

// Probability distribution over a finite hypothesis index set.
class DiscreteDistribution {
public:
    // Weights must be nonnegative and sum to 1 within 1e-12.
    explicit DiscreteDistribution(std::vector<double> weights);

    static DiscreteDistribution uniform(int support_size);
    // Normalizes nonnegative, not-all-zero weights.
    static DiscreteDistribution normalized(std::vector<double> weights);

    int support_size() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    double weight(int h) const { return weights_[static_cast<std::size_t>(h)]; }

private:
    std::vector<double> weights_;
};

// |H| x n table of per-hypothesis, per-sample losses in [0,1].
class LossTable {
public:
    LossTable(int hypothesis_count, int sample_count, std::vector<double> row_major);

    int hypothesis_count() const { return hypotheses_; }
    int sample_count() const { return samples_; }
    std::span<const double> row(int h) const;
    double at(int h, int i) const {
        return data_[static_cast<std::size_t>(h) * samples_ + i];
    }

private:
    int hypotheses_;
    int samples_;
    std::vector<double> data_;
};

// High-probability upper bound on the posterior-averaged CVaR, decomposed
// into its additive terms. bound = empirical_cvar_mixture + sqrt_term +
// linear_term + additive_term; holds with probability >= confidence.
struct Certificate {
    double bound = 0.0;
    double empirical_cvar_mixture = 0.0;
    double kl = 0.0;
    int cap_n = 0;       // union-bound grid size N
    double k_n = 0.0;    // kl + ln(N/delta)
    double eps_n = 0.0;  // deviation term with log numerator N/delta
    double sqrt_term = 0.0;
    double linear_term = 0.0;
    double additive_term = 0.0;
    double confidence = 0.0;  // 1 - 2*delta
    bool vacuous = false;
};

// KL(posterior || prior) over a shared finite support, with 0*ln(0/q) = 0.
// Returns +inf when the posterior charges a hypothesis of prior mass zero.
double kl_divergence(const DiscreteDistribution& posterior,
                     const DiscreteDistribution& prior);

// Per-sample posterior-weighted losses, one entry per column of the table.
SampleBatch mixture_loss(const DiscreteDistribution& posterior, const LossTable& table);

// Union-bound grid size N = ceil(log2(n/alpha)).
int grid_cap(double alpha, int n);

// Certificate from the already-computed mixture estimate and KL value.
Certificate certificate_from_components(double c_hat_mixture, double kl,
                                        const RiskParams& params);

// Full certificate for a posterior on a loss table. Requires delta < 1/2 and
// n >= 2; losses must lie in [0,1].
Certificate pac_bayes_certificate(const LossTable& table,
                                  const DiscreteDistribution& posterior,
                                  const DiscreteDistribution& prior,
                                  const RiskParams& params);

// Bound on the posterior-averaged CVaR at a fixed trade-off parameter eta in
// (0, alpha]: [Ĉ*(1+eps_n) + (kl + ln(1/delta))/(eta*n)] / (1 - eta*kappa(eta/alpha)/alpha).
// Returns +inf when the denominator is not positive. Valid at confidence
// 1 - 2*delta for a data-independent eta.
double fixed_eta_bound(double c_hat_mixture, double kl, const RiskParams& params,
                       double eta);

// Geometric grid {alpha/2, alpha/4, ..., alpha/2^N} with
// N = ceil(log2(n/alpha)/2).
std::vector<double> eta_grid(double alpha, int n);

// Gibbs posterior sweep: for each beta, weights proportional to
// prior * exp(-beta * empirical CVaR of the hypothesis row); returns the
// (posterior, certificate) pair with the smallest bound. beta = 0 is always
// part of the sweep, so the result never exceeds the prior's certificate.
// Ties go to the smallest beta.
std::pair<DiscreteDistribution, Certificate> select_posterior(
    const LossTable& table, const DiscreteDistribution& prior,
    const RiskParams& params, const std::vector<double>& beta_grid);

}  // namespace riskbound
