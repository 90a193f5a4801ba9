#pragma once

#include <vector>

namespace riskbound {

// Immutable batch of real-valued loss observations with cached descending
// order statistics. All estimators index order statistics 1-based: the k-th
// order statistic is the k-th largest sample.
class SampleBatch {
public:
    explicit SampleBatch(std::vector<double> values);

    int n() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& descending() const { return descending_; }

    // k-th largest value, k in [1, n].
    double order_stat(int k) const;

    double mean() const;
    double min() const { return descending_.back(); }
    double max() const { return descending_.front(); }

private:
    std::vector<double> values_;
    std::vector<double> descending_;
};

}  // namespace riskbound
