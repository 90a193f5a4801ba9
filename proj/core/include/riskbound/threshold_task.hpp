#pragma once

#include <cstdint>
#include <vector>

#include "riskbound/distributions.hpp"
#include "riskbound/pac_bayes.hpp"
#include "riskbound/rng.hpp"

namespace riskbound {

// Synthetic 1-D learning task for certificate experiments: features are
// uniform on [0,1], the label is 1{x >= 0.5} with each label flipped with
// probability `noise`, and hypotheses are threshold classifiers on an evenly
// spaced grid. Losses are 0/1 misclassification.
struct ThresholdTaskParams {
    int hypothesis_count = 1;
    int n = 2;
    double noise = 0.0;  // label flip probability, in [0, 1/2)
};

struct ThresholdTask {
    std::vector<double> thresholds;
    LossTable table;

    double noise = 0.0;

    // Exact misclassification probability of hypothesis h:
    // noise + |threshold - 1/2| * (1 - 2*noise).
    double true_error(int h) const;

    // The per-sample loss of hypothesis h is Bernoulli(true_error(h)).
    DistributionSpec loss_distribution(int h) const;
};

ThresholdTask make_threshold_task(const ThresholdTaskParams& params, SplitMix64& rng);

}  // namespace riskbound
