#pragma once

#include "riskbound/samples.hpp"

namespace riskbound {

// Level/confidence/sample-size triple shared by every bound.
struct RiskParams {
    double alpha = 0.0;  // CVaR level, in (0,1)
    double delta = 0.0;  // failure probability, in (0,1)
    int n = 0;           // sample count, >= 1

    // Throws std::invalid_argument when outside the valid ranges.
    void validate() const;
};

// Result of a variational CVaR estimate: the value, the minimizing location
// mu_hat, and the tail-average component E[Z - mu_hat]_+ / alpha. For the
// standard estimator value == minimizer_mu + tail_average; the budget-relaxed
// estimator adds |minimizer_mu| * epsilon.
struct EstimateResult {
    double value = 0.0;
    double minimizer_mu = 0.0;
    double tail_average = 0.0;
};

// Bernstein-style deviation radius sqrt(ln(c)/(2*alpha*n)) + ln(c)/(3*alpha*n).
// The log numerator c is exposed explicitly because different bounds feed
// different values (1/delta vs N/delta) through the same functional form.
struct DeviationTerm {
    double epsilon = 0.0;
    double log_numerator = 0.0;
};

// 1-based index ceil(n * alpha) of the order statistic realizing the
// empirical value-at-risk.
int var_order_index(int n, double alpha);

// Empirical value-at-risk: the ceil(n*alpha)-th largest sample.
double empirical_var(const SampleBatch& batch, double alpha);

// Empirical CVaR, inf over mu of { mu + mean[Z - mu]_+ / alpha }. The
// objective is convex piecewise-linear with breakpoints at sample values, so
// the minimum is found by enumerating distinct sample values; ties are broken
// toward the largest minimizer.
EstimateResult empirical_cvar(const SampleBatch& batch, double alpha);

// Same objective evaluated at a caller-supplied mu (no minimization).
double cvar_objective(const SampleBatch& batch, double alpha, double mu);

DeviationTerm deviation_term(double alpha, int n, double log_numerator);

// Budget-relaxed CVaR estimator in variational form:
// inf over mu of { mu + |mu|*epsilon + mean[Z - mu]_+ / alpha }.
// Breakpoints are the sample values plus 0.
EstimateResult relaxed_cvar_variational(const SampleBatch& batch, double alpha,
                                        double epsilon);

// The same estimator computed from its primal definition: the supremum of
// mean(Z * q) over densities q in [0, 1/alpha]^n whose mean lies within
// epsilon of 1. Solved by greedy mass allocation; serves as the independent
// dual route for the variational form.
double relaxed_cvar_primal(const SampleBatch& batch, double alpha, double epsilon);

// (e^x - 1 - x) / x^2 with the removable singularity at 0 handled by a short
// series; equals 1/2 at x = 0 and stays below 3/5 for x <= 1/2.
double kappa(double x);

}  // namespace riskbound
