#include "riskbound/samples.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace riskbound {

SampleBatch::SampleBatch(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("SampleBatch: batch must contain at least one sample");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("SampleBatch: samples must be finite");
        }
    }
    descending_ = values_;
    std::sort(descending_.begin(), descending_.end(), std::greater<double>());
}

double SampleBatch::order_stat(int k) const {
    if (k < 1 || k > n()) {
        throw std::invalid_argument("SampleBatch::order_stat: index out of range");
    }
    return descending_[static_cast<std::size_t>(k - 1)];
}

double SampleBatch::mean() const {
    const double sum = std::accumulate(values_.begin(), values_.end(), 0.0);
    return sum / static_cast<double>(n());
}

}  // namespace riskbound
