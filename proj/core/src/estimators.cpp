#include "riskbound/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace riskbound {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1)");
    }
}

// Ties in the objective value go to the largest breakpoint.
bool better(const EstimateResult& a, const EstimateResult& b) {
    return a.value < b.value || (a.value == b.value && a.minimizer_mu > b.minimizer_mu);
}

// Minimizes mu + |mu|*epsilon + mean[Z - mu]_+ / alpha over the breakpoints of
// the convex piecewise-linear objective: the sample values, plus 0 when the
// |mu| kink is present. One prefix-sum sweep of the descending order.
EstimateResult minimize_over_breakpoints(const SampleBatch& batch, double alpha,
                                         double epsilon, bool with_zero) {
    const std::vector<double>& desc = batch.descending();
    const double denom = static_cast<double>(batch.n()) * alpha;

    EstimateResult best;
    bool have = false;
    double prefix = 0.0;  // sum of the samples above the current breakpoint
    double positive_sum = 0.0;
    for (std::size_t k = 0; k < desc.size(); ++k) {
        const double mu = desc[k];
        if (mu > 0.0) positive_sum += mu;
        EstimateResult r;
        r.minimizer_mu = mu;
        r.tail_average = (prefix - static_cast<double>(k) * mu) / denom;
        r.value = mu + std::abs(mu) * epsilon + r.tail_average;
        if (!have || better(r, best)) {
            best = r;
            have = true;
        }
        prefix += mu;
    }
    if (with_zero) {
        EstimateResult zero;
        zero.minimizer_mu = 0.0;
        zero.tail_average = positive_sum / denom;
        zero.value = zero.tail_average;
        if (better(zero, best)) best = zero;
    }
    return best;
}

}  // namespace

void RiskParams::validate() const {
    check_alpha(alpha);
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1)");
    }
    if (n < 1) {
        throw std::invalid_argument("n must be at least 1");
    }
}

int var_order_index(int n, double alpha) {
    check_alpha(alpha);
    int k = static_cast<int>(std::ceil(static_cast<double>(n) * alpha));
    return std::clamp(k, 1, n);
}

double empirical_var(const SampleBatch& batch, double alpha) {
    return batch.order_stat(var_order_index(batch.n(), alpha));
}

double cvar_objective(const SampleBatch& batch, double alpha, double mu) {
    check_alpha(alpha);
    double excess = 0.0;
    for (double z : batch.descending()) {
        if (z <= mu) break;
        excess += z - mu;
    }
    return mu + excess / (static_cast<double>(batch.n()) * alpha);
}

EstimateResult empirical_cvar(const SampleBatch& batch, double alpha) {
    check_alpha(alpha);
    return minimize_over_breakpoints(batch, alpha, 0.0, false);
}

DeviationTerm deviation_term(double alpha, int n, double log_numerator) {
    check_alpha(alpha);
    if (n < 1) {
        throw std::invalid_argument("deviation_term: n must be at least 1");
    }
    if (!(log_numerator > 1.0)) {
        throw std::invalid_argument("deviation_term: log numerator must exceed 1");
    }
    const double an = alpha * static_cast<double>(n);
    const double lg = std::log(log_numerator);
    DeviationTerm d;
    d.log_numerator = log_numerator;
    d.epsilon = std::sqrt(lg / (2.0 * an)) + lg / (3.0 * an);
    return d;
}

EstimateResult relaxed_cvar_variational(const SampleBatch& batch, double alpha,
                                        double epsilon) {
    check_alpha(alpha);
    if (epsilon < 0.0) {
        throw std::invalid_argument("relaxed_cvar_variational: epsilon must be >= 0");
    }
    if (epsilon == 0.0) {
        // The |mu| term vanishes and the extra breakpoint at 0 is redundant:
        // this is exactly the standard estimator.
        return empirical_cvar(batch, alpha);
    }
    return minimize_over_breakpoints(batch, alpha, epsilon, true);
}

double relaxed_cvar_primal(const SampleBatch& batch, double alpha, double epsilon) {
    check_alpha(alpha);
    if (epsilon < 0.0) {
        throw std::invalid_argument("relaxed_cvar_primal: epsilon must be >= 0");
    }
    const double cap = 1.0 / alpha;
    const double n = static_cast<double>(batch.n());
    const std::vector<double>& desc = batch.descending();

    // Value of the best allocation with per-sample mean mass exactly m:
    // fill the largest samples at the cap, one fractional coordinate last.
    auto value_at = [&](double m) {
        double mass = m * n;
        double sum = 0.0;
        for (double z : desc) {
            const double take = std::min(cap, mass);
            sum += z * take;
            mass -= take;
            if (mass <= 0.0) break;
        }
        return sum / n;
    };

    // The value is concave in the mass budget; its unconstrained maximum
    // saturates exactly the strictly positive samples. Evaluating there and
    // at both budget extremes covers every shape of the constraint interval.
    const double lo = std::max(0.0, 1.0 - epsilon);
    const double hi = std::min(1.0 + epsilon, cap);
    const auto positive = static_cast<double>(
        std::count_if(desc.begin(), desc.end(), [](double z) { return z > 0.0; }));
    const double peak = std::clamp(positive * cap / n, lo, hi);

    return std::max({value_at(lo), value_at(hi), value_at(peak)});
}

double kappa(double x) {
    if (std::abs(x) < 1e-4) {
        // Series through x^3; the next term is below 1e-16 relative here.
        return 0.5 + x / 6.0 + x * x / 24.0 + x * x * x / 120.0;
    }
    return (std::expm1(x) - x) / (x * x);
}

}  // namespace riskbound
