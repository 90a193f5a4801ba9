#include "riskbound/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "riskbound/pac_bayes.hpp"
#include "riskbound/threshold_task.hpp"

namespace riskbound {

namespace {

struct TrialOutcome {
    bool violation = false;
    double slack = 0.0;
};

void check_compatibility(const DistributionSpec& spec, const BoundKind& kind) {
    if (std::holds_alternative<Theorem4Bound>(kind) && !spec.support_in_unit_interval()) {
        throw std::invalid_argument(
            "coverage_experiment: the bounded-loss bound requires support in [0,1] "
            "(got spec " +
            to_string(spec) + ")");
    }
    if (const auto* pb = std::get_if<PacBayesBound>(&kind)) {
        if (!std::holds_alternative<Uniform01>(spec.family())) {
            throw std::invalid_argument(
                "coverage_experiment: the certificate task draws uniform01 features; "
                "pass --spec uniform01");
        }
        if (pb->hypothesis_count < 1) {
            throw std::invalid_argument("coverage_experiment: need >= 1 hypothesis");
        }
    }
}

void run_range(int lo, int hi, const std::function<void(int)>& body) {
    for (int t = lo; t < hi; ++t) body(t);
}

}  // namespace

std::string to_string(const BoundKind& kind) {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Theorem4Bound>) {
                return "bounded01";
            } else if constexpr (std::is_same_v<T, SubGaussianBound>) {
                return "subgaussian(sigma=" + format_double_17(k.sigma) + ")";
            } else if constexpr (std::is_same_v<T, SubExponentialBound>) {
                return "subexponential(sigma=" + format_double_17(k.sigma) +
                       ";b=" + format_double_17(k.b) + ")";
            } else {
                std::string s = "pacbayes(h=" + std::to_string(k.hypothesis_count) +
                                ";noise=" + format_double_17(k.noise) + ";betas=";
                for (std::size_t i = 0; i < k.beta_grid.size(); ++i) {
                    if (i) s += "|";
                    s += format_double_17(k.beta_grid[i]);
                }
                return s + ")";
            }
        },
        kind);
}

CoverageReport coverage_experiment(const DistributionSpec& spec, const RiskParams& params,
                                   const BoundKind& kind, int trials, std::uint64_t seed,
                                   const CoverageOptions& options) {
    params.validate();
    if (trials < 1) {
        throw std::invalid_argument("coverage_experiment: trials must be >= 1");
    }
    if (!(options.bound_scale > 0.0)) {
        throw std::invalid_argument("coverage_experiment: bound scale must be positive");
    }
    check_compatibility(spec, kind);

    // For the certificate kind the hypothesis grid is trial-independent, so
    // the per-hypothesis true CVaR oracle values are computed once.
    std::vector<double> hypothesis_true_cvar;
    const PacBayesBound* pac = std::get_if<PacBayesBound>(&kind);
    if (pac != nullptr) {
        SplitMix64 probe(0);
        const ThresholdTask proto = make_threshold_task(
            ThresholdTaskParams{pac->hypothesis_count, 1, pac->noise}, probe);
        hypothesis_true_cvar.reserve(proto.thresholds.size());
        for (int h = 0; h < pac->hypothesis_count; ++h) {
            hypothesis_true_cvar.push_back(
                numeric_cvar_oracle(proto.loss_distribution(h), params.alpha));
        }
    }

    const double target_plain = pac == nullptr ? true_cvar(spec, params.alpha) : 0.0;

    const auto run_trial = [&](int t) -> TrialOutcome {
        SplitMix64 rng(substream_seed(seed, static_cast<std::uint64_t>(t)));
        double upper = 0.0;
        double target = 0.0;

        if (pac != nullptr) {
            const ThresholdTask task = make_threshold_task(
                ThresholdTaskParams{pac->hypothesis_count, params.n, pac->noise}, rng);
            const auto [posterior, cert] =
                select_posterior(task.table, DiscreteDistribution::uniform(pac->hypothesis_count),
                                 params, pac->beta_grid);
            upper = cert.bound;
            for (int h = 0; h < pac->hypothesis_count; ++h) {
                target += posterior.weight(h) * hypothesis_true_cvar[static_cast<std::size_t>(h)];
            }
        } else {
            std::vector<double> draws;
            spec.sample_n(rng, params.n, draws);
            const SampleBatch batch(std::move(draws));
            target = target_plain;
            if (std::holds_alternative<Theorem4Bound>(kind)) {
                upper = bounded_cvar_upper_bound(empirical_cvar(batch, params.alpha), params)
                            .bound;
            } else {
                const TailClass tail =
                    std::holds_alternative<SubGaussianBound>(kind)
                        ? TailClass::sub_gaussian(std::get<SubGaussianBound>(kind).sigma)
                        : TailClass::sub_exponential(std::get<SubExponentialBound>(kind).sigma,
                                                     std::get<SubExponentialBound>(kind).b);
                RiskParams effective = params;
                MeanMode mode = OracleMean{spec.mean()};
                if (options.empirical_mean_mode) {
                    effective.delta = 0.5 * params.delta;
                    mode = EmpiricalUpperMean{0.5 * params.delta, tail};
                }
                const DeviationBound dev = cvar_deviation_bound(batch, effective, tail, mode);
                upper = empirical_cvar(batch, params.alpha).value + dev.total;
            }
        }

        upper *= options.bound_scale;
        TrialOutcome out;
        out.violation = target > upper;
        out.slack = upper - target;
        return out;
    };

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    const int threads = std::clamp(options.threads, 1, trials);
    if (threads == 1) {
        run_range(0, trials, [&](int t) { outcomes[static_cast<std::size_t>(t)] = run_trial(t); });
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const int chunk = (trials + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const int lo = w * chunk;
            const int hi = std::min(trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                run_range(lo, hi,
                          [&](int t) { outcomes[static_cast<std::size_t>(t)] = run_trial(t); });
            });
        }
        for (auto& th : pool) th.join();
    }

    CoverageReport report;
    report.trials = trials;
    report.seed = seed;
    report.threshold = 2.0 * params.delta;
    double slack_sum = 0.0;
    int kept = 0;
    for (const TrialOutcome& o : outcomes) {
        if (o.violation) {
            ++report.violations;
        } else {
            slack_sum += o.slack;
            ++kept;
        }
    }
    report.violation_rate =
        static_cast<double>(report.violations) / static_cast<double>(trials);
    report.mean_slack = kept > 0 ? slack_sum / kept : 0.0;
    return report;
}

double coverage_pass_threshold(const CoverageReport& report) {
    const double p = report.threshold;
    return p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(report.trials));
}

Record coverage_record(const DistributionSpec& spec, const RiskParams& params,
                       const BoundKind& kind, const CoverageReport& report) {
    Record r;
    r.add("spec", to_string(spec))
        .add("alpha", params.alpha)
        .add("delta", params.delta)
        .add("n", params.n)
        .add("trials", report.trials)
        .add("bound_kind", to_string(kind))
        .add("violations", report.violations)
        .add("violation_rate", report.violation_rate)
        .add("threshold", report.threshold)
        .add("mean_slack", report.mean_slack)
        .add("seed", report.seed);
    return r;
}

}  // namespace riskbound
