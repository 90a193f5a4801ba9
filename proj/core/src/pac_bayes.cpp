#include "riskbound/pac_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskbound {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWeightTol = 1e-12;
}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw std::invalid_argument("DiscreteDistribution: empty support");
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("DiscreteDistribution: negative weight");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightTol) {
        throw std::invalid_argument("DiscreteDistribution: weights must sum to 1");
    }
}

DiscreteDistribution DiscreteDistribution::uniform(int support_size) {
    if (support_size < 1) {
        throw std::invalid_argument("DiscreteDistribution::uniform: empty support");
    }
    return DiscreteDistribution(
        std::vector<double>(support_size, 1.0 / static_cast<double>(support_size)));
}

DiscreteDistribution DiscreteDistribution::normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument(
                "DiscreteDistribution::normalized: weights must be finite and >= 0");
        }
        sum += w;
    }
    if (!(sum > 0.0)) {
        throw std::invalid_argument("DiscreteDistribution::normalized: zero total mass");
    }
    for (double& w : weights) w /= sum;
    return DiscreteDistribution(std::move(weights));
}

LossTable::LossTable(int hypothesis_count, int sample_count, std::vector<double> row_major)
    : hypotheses_(hypothesis_count), samples_(sample_count), data_(std::move(row_major)) {
    if (hypotheses_ < 1 || samples_ < 1) {
        throw std::invalid_argument("LossTable: dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(hypotheses_) * samples_) {
        throw std::invalid_argument("LossTable: data size does not match dimensions");
    }
    for (double v : data_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("LossTable: losses must lie in [0,1]");
        }
    }
}

std::span<const double> LossTable::row(int h) const {
    if (h < 0 || h >= hypotheses_) {
        throw std::invalid_argument("LossTable::row: index out of range");
    }
    return {data_.data() + static_cast<std::size_t>(h) * samples_,
            static_cast<std::size_t>(samples_)};
}

double kl_divergence(const DiscreteDistribution& posterior,
                     const DiscreteDistribution& prior) {
    if (posterior.support_size() != prior.support_size()) {
        throw std::invalid_argument("kl_divergence: mismatched supports");
    }
    double kl = 0.0;
    for (int h = 0; h < posterior.support_size(); ++h) {
        const double p = posterior.weight(h);
        if (p == 0.0) continue;
        const double q = prior.weight(h);
        if (q == 0.0) return kInf;  // absolute continuity violated
        kl += p * std::log(p / q);
    }
    // Mathematically nonnegative; summation roundoff can land a few ulps below.
    return std::max(kl, 0.0);
}

SampleBatch mixture_loss(const DiscreteDistribution& posterior, const LossTable& table) {
    if (posterior.support_size() != table.hypothesis_count()) {
        throw std::invalid_argument("mixture_loss: posterior does not match table");
    }
    std::vector<double> mixed(static_cast<std::size_t>(table.sample_count()), 0.0);
    for (int h = 0; h < table.hypothesis_count(); ++h) {
        const double w = posterior.weight(h);
        if (w == 0.0) continue;
        const auto row = table.row(h);
        for (int i = 0; i < table.sample_count(); ++i) {
            mixed[static_cast<std::size_t>(i)] += w * row[static_cast<std::size_t>(i)];
        }
    }
    return SampleBatch(std::move(mixed));
}

int grid_cap(double alpha, int n) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("grid_cap: alpha must lie in (0,1)");
    }
    if (n < 2) {
        throw std::invalid_argument("grid_cap: n must be at least 2");
    }
    return static_cast<int>(std::ceil(std::log2(static_cast<double>(n) / alpha)));
}

Certificate certificate_from_components(double c_hat_mixture, double kl,
                                        const RiskParams& params) {
    params.validate();
    if (!(params.delta < 0.5)) {
        throw std::invalid_argument("certificate: delta must be below 1/2");
    }
    if (params.n < 2) {
        throw std::invalid_argument("certificate: n must be at least 2");
    }
    if (c_hat_mixture < 0.0) {
        throw std::invalid_argument("certificate: mixture estimate must be >= 0");
    }
    if (kl < 0.0) {
        throw std::invalid_argument("certificate: kl must be >= 0");
    }

    Certificate cert;
    cert.empirical_cvar_mixture = c_hat_mixture;
    cert.kl = kl;
    cert.cap_n = grid_cap(params.alpha, params.n);
    cert.confidence = 1.0 - 2.0 * params.delta;
    const double log_num = static_cast<double>(cert.cap_n) / params.delta;
    cert.eps_n = deviation_term(params.alpha, params.n, log_num).epsilon;
    cert.k_n = kl + std::log(log_num);
    if (std::isinf(kl)) {
        cert.vacuous = true;
        cert.bound = cert.sqrt_term = cert.linear_term = cert.additive_term = kInf;
        return cert;
    }
    const double an = params.alpha * static_cast<double>(params.n);
    cert.sqrt_term = std::sqrt(27.0 * c_hat_mixture * cert.k_n / (5.0 * an));
    cert.linear_term = 2.0 * cert.eps_n * c_hat_mixture;
    cert.additive_term = 27.0 * cert.k_n / (5.0 * an);
    cert.bound = c_hat_mixture + cert.sqrt_term + cert.linear_term + cert.additive_term;
    return cert;
}

Certificate pac_bayes_certificate(const LossTable& table,
                                  const DiscreteDistribution& posterior,
                                  const DiscreteDistribution& prior,
                                  const RiskParams& params) {
    if (params.n != table.sample_count()) {
        throw std::invalid_argument("pac_bayes_certificate: params.n must match table");
    }
    const double kl = kl_divergence(posterior, prior);
    const double c_hat = empirical_cvar(mixture_loss(posterior, table), params.alpha).value;
    return certificate_from_components(c_hat, kl, params);
}

double fixed_eta_bound(double c_hat_mixture, double kl, const RiskParams& params,
                       double eta) {
    params.validate();
    if (!(eta > 0.0 && eta <= params.alpha)) {
        throw std::invalid_argument("fixed_eta_bound: eta must lie in (0, alpha]");
    }
    if (kl < 0.0 || c_hat_mixture < 0.0) {
        throw std::invalid_argument("fixed_eta_bound: kl and estimate must be >= 0");
    }
    const double denom = 1.0 - eta * kappa(eta / params.alpha) / params.alpha;
    if (!(denom > 0.0)) return kInf;
    const double eps =
        deviation_term(params.alpha, params.n, 1.0 / params.delta).epsilon;
    const double numer = c_hat_mixture * (1.0 + eps) +
                         (kl + std::log(1.0 / params.delta)) /
                             (eta * static_cast<double>(params.n));
    return numer / denom;
}

std::vector<double> eta_grid(double alpha, int n) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("eta_grid: alpha must lie in (0,1)");
    }
    if (n < 2) {
        throw std::invalid_argument("eta_grid: n must be at least 2");
    }
    const int depth = static_cast<int>(
        std::ceil(0.5 * std::log2(static_cast<double>(n) / alpha)));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(depth));
    double eta = alpha;
    for (int k = 0; k < depth; ++k) {
        eta *= 0.5;
        grid.push_back(eta);
    }
    return grid;
}

std::pair<DiscreteDistribution, Certificate> select_posterior(
    const LossTable& table, const DiscreteDistribution& prior,
    const RiskParams& params, const std::vector<double>& beta_grid) {
    if (beta_grid.empty()) {
        throw std::invalid_argument("select_posterior: beta grid must be nonempty");
    }
    std::vector<double> betas = beta_grid;
    for (double b : betas) {
        if (!(b >= 0.0) || !std::isfinite(b)) {
            throw std::invalid_argument("select_posterior: betas must be finite and >= 0");
        }
    }
    std::sort(betas.begin(), betas.end());
    betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
    if (betas.front() != 0.0) {
        betas.insert(betas.begin(), 0.0);  // keeps the prior in the sweep
    }

    // Per-hypothesis empirical CVaR, shared across the whole sweep.
    std::vector<double> row_cvar(static_cast<std::size_t>(table.hypothesis_count()));
    for (int h = 0; h < table.hypothesis_count(); ++h) {
        const auto row = table.row(h);
        row_cvar[static_cast<std::size_t>(h)] =
            empirical_cvar(SampleBatch({row.begin(), row.end()}), params.alpha).value;
    }
    const double min_cvar = *std::min_element(row_cvar.begin(), row_cvar.end());

    std::pair<DiscreteDistribution, Certificate> best{prior, Certificate{}};
    bool have_best = false;
    for (double beta : betas) {
        std::vector<double> w(row_cvar.size());
        for (std::size_t h = 0; h < w.size(); ++h) {
            w[h] = prior.weight(static_cast<int>(h)) *
                   std::exp(-beta * (row_cvar[h] - min_cvar));
        }
        DiscreteDistribution posterior = DiscreteDistribution::normalized(std::move(w));
        Certificate cert = pac_bayes_certificate(table, posterior, prior, params);
        if (!have_best || cert.bound < best.second.bound) {
            best = {std::move(posterior), cert};
            have_best = true;
        }
    }
    return best;
}

}  // namespace riskbound
