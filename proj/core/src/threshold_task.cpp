#include "riskbound/threshold_task.hpp"

#include <cmath>
#include <stdexcept>

namespace riskbound {

double ThresholdTask::true_error(int h) const {
    const double d = std::abs(thresholds[static_cast<std::size_t>(h)] - 0.5);
    return noise + d * (1.0 - 2.0 * noise);
}

DistributionSpec ThresholdTask::loss_distribution(int h) const {
    return DistributionSpec(Bernoulli{true_error(h)});
}

ThresholdTask make_threshold_task(const ThresholdTaskParams& params, SplitMix64& rng) {
    if (params.hypothesis_count < 1) {
        throw std::invalid_argument("threshold task: need at least one hypothesis");
    }
    if (params.n < 1) {
        throw std::invalid_argument("threshold task: need at least one sample");
    }
    if (!(params.noise >= 0.0 && params.noise < 0.5)) {
        throw std::invalid_argument("threshold task: noise must lie in [0, 1/2)");
    }

    std::vector<double> thresholds;
    thresholds.reserve(static_cast<std::size_t>(params.hypothesis_count));
    if (params.hypothesis_count == 1) {
        thresholds.push_back(0.5);
    } else {
        for (int j = 0; j < params.hypothesis_count; ++j) {
            thresholds.push_back(static_cast<double>(j) /
                                 static_cast<double>(params.hypothesis_count - 1));
        }
    }

    std::vector<double> x(static_cast<std::size_t>(params.n));
    std::vector<int> y(static_cast<std::size_t>(params.n));
    for (int i = 0; i < params.n; ++i) {
        x[static_cast<std::size_t>(i)] = rng.next_unit();
        const int clean = x[static_cast<std::size_t>(i)] >= 0.5 ? 1 : 0;
        const bool flip = rng.next_unit() < params.noise;
        y[static_cast<std::size_t>(i)] = flip ? 1 - clean : clean;
    }

    std::vector<double> losses;
    losses.reserve(static_cast<std::size_t>(params.hypothesis_count) * params.n);
    for (int h = 0; h < params.hypothesis_count; ++h) {
        const double tau = thresholds[static_cast<std::size_t>(h)];
        for (int i = 0; i < params.n; ++i) {
            const int pred = x[static_cast<std::size_t>(i)] >= tau ? 1 : 0;
            losses.push_back(pred == y[static_cast<std::size_t>(i)] ? 0.0 : 1.0);
        }
    }

    return ThresholdTask{std::move(thresholds),
                         LossTable(params.hypothesis_count, params.n, std::move(losses)),
                         params.noise};
}

}  // namespace riskbound
