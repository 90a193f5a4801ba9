#include "riskbound/concentration.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace riskbound {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_tail_scalar(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("TailClass: ") + name +
                                    " must be positive and finite");
    }
}
}  // namespace

TailClass TailClass::bounded01() { return TailClass{TailKind::Bounded01, 0.0, 0.0}; }

TailClass TailClass::sub_gaussian(double sigma) {
    check_tail_scalar(sigma, "sigma");
    return TailClass{TailKind::SubGaussian, sigma, 0.0};
}

TailClass TailClass::sub_exponential(double sigma, double b) {
    check_tail_scalar(sigma, "sigma");
    check_tail_scalar(b, "b");
    return TailClass{TailKind::SubExponential, sigma, b};
}

double subgaussian_tail(double t, double sigma, double alpha, int n) {
    if (t < 0.0) throw std::invalid_argument("subgaussian_tail: t must be >= 0");
    check_tail_scalar(sigma, "sigma");
    const double na = static_cast<double>(n) * alpha * alpha;
    return 2.0 * std::exp(-na * t * t / (2.0 * sigma * sigma));
}

double subexponential_tail(double t, double sigma, double b, double alpha, int n) {
    if (t < 0.0) throw std::invalid_argument("subexponential_tail: t must be >= 0");
    check_tail_scalar(sigma, "sigma");
    if (b < 0.0) throw std::invalid_argument("subexponential_tail: b must be >= 0");
    // Regime threshold sigma^2/(b*alpha), with the convention 0/0 = +inf so
    // that b = 0 keeps the quadratic regime everywhere.
    const double threshold = b > 0.0 ? sigma * sigma / (b * alpha) : kInf;
    if (t <= threshold) {
        return subgaussian_tail(t, sigma, alpha, n);
    }
    return 2.0 * std::exp(-static_cast<double>(n) * alpha * t / (2.0 * b));
}

double deviation_at_confidence(const RiskParams& params, const TailClass& tail) {
    params.validate();
    const double lg = std::log(2.0 / params.delta);
    const double n = static_cast<double>(params.n);
    switch (tail.kind) {
        case TailKind::SubGaussian:
            return (tail.sigma / params.alpha) * std::sqrt(2.0 * lg / n);
        case TailKind::SubExponential: {
            // The quadratic and linear inversions cross the regime threshold
            // under the same condition, so exactly one is self-consistent.
            const double t_quad =
                (tail.sigma / params.alpha) * std::sqrt(2.0 * lg / n);
            const double threshold =
                tail.b > 0.0 ? tail.sigma * tail.sigma / (tail.b * params.alpha) : kInf;
            if (t_quad <= threshold) return t_quad;
            return 2.0 * tail.b * lg / (n * params.alpha);
        }
        case TailKind::Bounded01:
            throw std::invalid_argument(
                "deviation_at_confidence: use bounded_cvar_upper_bound for bounded losses");
    }
    throw std::invalid_argument("deviation_at_confidence: unknown tail class");
}

double order_stat_term(const SampleBatch& batch, double alpha, double epsilon,
                       const MeanMode& mode) {
    const double stat = empirical_var(batch, alpha);
    if (const auto* oracle = std::get_if<OracleMean>(&mode)) {
        return std::abs(stat - oracle->mean) * epsilon;
    }
    const auto& emp = std::get<EmpiricalUpperMean>(mode);
    if (!(emp.delta_split > 0.0 && emp.delta_split < 1.0)) {
        throw std::invalid_argument("order_stat_term: delta_split must lie in (0,1)");
    }
    const double na = static_cast<double>(batch.n()) * alpha;
    const double floor_na = std::floor(na);
    if (floor_na < 1.0) {
        throw std::invalid_argument(
            "order_stat_term: empirical upper mode requires floor(n*alpha) >= 1");
    }
    const double c_hat = empirical_cvar(batch, alpha).value;
    const double lg = std::log(2.0 / emp.delta_split);
    double mean_radius = 0.0;
    switch (emp.tail.kind) {
        case TailKind::Bounded01:  // Hoeffding on [0,1]
            mean_radius = std::sqrt(lg / (2.0 * batch.n()));
            break;
        case TailKind::SubGaussian:
        case TailKind::SubExponential:
            mean_radius = emp.tail.sigma * std::sqrt(2.0 * lg / batch.n());
            break;
    }
    return ((na / floor_na) * c_hat - batch.mean() + mean_radius) * epsilon;
}

double invert_sqrt_bound(double r_hat, double a, double b) {
    if (r_hat < 0.0 || a < 0.0 || b < 0.0) {
        throw std::invalid_argument("invert_sqrt_bound: inputs must be nonnegative");
    }
    return r_hat + std::sqrt(r_hat * a) + 2.0 * b + a;
}

DeviationBound cvar_deviation_bound(const SampleBatch& batch, const RiskParams& params,
                                    const TailClass& tail, const MeanMode& mode) {
    DeviationBound out;
    out.params = params;
    out.tail = tail;
    out.oracle_mean = std::holds_alternative<OracleMean>(mode);
    out.main_term = deviation_at_confidence(params, tail);
    const double eps = deviation_term(params.alpha, params.n, 1.0 / params.delta).epsilon;
    out.order_stat_term = riskbound::order_stat_term(batch, params.alpha, eps, mode);
    out.total = out.main_term + out.order_stat_term;
    out.confidence = 1.0 - 2.0 * params.delta;
    return out;
}

BoundCertificate bounded_cvar_upper_bound(const EstimateResult& estimate,
                                          const RiskParams& params) {
    params.validate();
    if (estimate.value < 0.0) {
        throw std::invalid_argument(
            "bounded_cvar_upper_bound: estimate must come from losses in [0,1]");
    }
    BoundCertificate cert;
    cert.params = params;
    cert.empirical_cvar = estimate.value;
    cert.confidence = 1.0 - 2.0 * params.delta;
    cert.eps_n = deviation_term(params.alpha, params.n, 1.0 / params.delta).epsilon;
    if (cert.eps_n >= 1.0) {
        cert.vacuous = true;
        cert.bound = kInf;
        cert.base_term = cert.sqrt_term = cert.linear_term = cert.additive_term = kInf;
        return cert;
    }
    const double shrink = 1.0 - cert.eps_n;
    const double lg = std::log(1.0 / params.delta);
    const double an = params.alpha * static_cast<double>(params.n);
    const double a = 12.0 * lg / (5.0 * an * shrink * shrink);
    const double b = 3.0 * lg / (an * shrink);
    cert.base_term = estimate.value / shrink;
    cert.sqrt_term = std::sqrt(cert.base_term * a);
    cert.linear_term = 2.0 * b;
    cert.additive_term = a;
    cert.bound = invert_sqrt_bound(cert.base_term, a, b);
    return cert;
}

}  // namespace riskbound
