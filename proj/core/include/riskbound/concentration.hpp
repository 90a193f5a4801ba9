#pragma once

#include <variant>

#include "riskbound/estimators.hpp"
#include "riskbound/samples.hpp"

namespace riskbound {

enum class TailKind { Bounded01, SubGaussian, SubExponential };

// Tail assumption on the loss distribution. sigma is the variance proxy of
// the sub-Gaussian / sub-exponential MGF bound, b the sub-exponential scale.
struct TailClass {
    TailKind kind = TailKind::Bounded01;
    double sigma = 0.0;
    double b = 0.0;

    static TailClass bounded01();
    static TailClass sub_gaussian(double sigma);
    static TailClass sub_exponential(double sigma, double b);
};

// How the unknown true mean entering the order-statistic term is handled:
// either supplied exactly (simulations know it) or upper-bounded empirically
// at confidence delta_split.
struct OracleMean {
    double mean = 0.0;
};
struct EmpiricalUpperMean {
    double delta_split = 0.0;
    TailClass tail;
};
using MeanMode = std::variant<OracleMean, EmpiricalUpperMean>;

// Tail probability excess 2*exp(-n*alpha^2*t^2 / (2*sigma^2)) of the
// sub-Gaussian deviation bound (uncapped; can exceed 1 near t = 0).
double subgaussian_tail(double t, double sigma, double alpha, int n);

// Two-regime sub-exponential tail: quadratic exponent up to t = sigma^2/(b*alpha),
// linear beyond. b = 0 degenerates to the sub-Gaussian tail (threshold +inf).
double subexponential_tail(double t, double sigma, double b, double alpha, int n);

// The deviation t making the tail excess equal delta. Sub-Gaussian:
// (sigma/alpha)*sqrt(2*ln(2/delta)/n). Sub-exponential: the inversion of
// whichever regime is consistent with the resulting t.
double deviation_at_confidence(const RiskParams& params, const TailClass& tail);

// |Z_(ceil(n*alpha)) - E[Z]| * epsilon, with E[Z] either given exactly or
// replaced by the empirical upper bound
// (n*alpha/floor(n*alpha)) * cvar_hat - mean_hat + mean deviation radius.
double order_stat_term(const SampleBatch& batch, double alpha, double epsilon,
                       const MeanMode& mode);

// Upper bound implied by the premise R <= R_hat + sqrt(R*A) + B:
// returns R_hat + sqrt(R_hat*A) + 2*B + A.
double invert_sqrt_bound(double r_hat, double a, double b);

// Deviation allowance t + t_n for the unbounded-loss bounds, decomposed.
struct DeviationBound {
    double total = 0.0;
    double main_term = 0.0;
    double order_stat_term = 0.0;
    RiskParams params;
    TailClass tail;
    bool oracle_mean = true;
    double confidence = 0.0;  // 1 - 2*delta
};

DeviationBound cvar_deviation_bound(const SampleBatch& batch, const RiskParams& params,
                                    const TailClass& tail, const MeanMode& mode);

// Closed-form high-confidence upper bound on CVaR for losses in [0,1],
// computed from the empirical estimate alone. Holds with probability
// >= 1 - 2*delta; reported as base + sqrt + linear + additive terms.
struct BoundCertificate {
    double bound = 0.0;
    double empirical_cvar = 0.0;
    double base_term = 0.0;      // Ĉ / (1 - eps_n)
    double sqrt_term = 0.0;
    double linear_term = 0.0;
    double additive_term = 0.0;
    double eps_n = 0.0;
    double confidence = 0.0;  // 1 - 2*delta
    bool vacuous = false;     // eps_n >= 1: bound reported as +inf
    RiskParams params;
};

BoundCertificate bounded_cvar_upper_bound(const EstimateResult& estimate,
                                          const RiskParams& params);

}  // namespace riskbound
