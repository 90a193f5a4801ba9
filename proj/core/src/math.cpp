#include "riskbound/math.hpp"

#include <cmath>
#include <stdexcept>

namespace riskbound {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace

double normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");
    }
    // Abramowitz-Stegun 26.2.23 seed (|error| < 4.5e-4), then Newton against
    // the exact CDF. Three steps take the seed error far below double epsilon.
    const double q = p < 0.5 ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(q));
    double x = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
    if (p < 0.5) x = -x;
    for (int i = 0; i < 3; ++i) {
        const double err = normal_cdf(x) - p;
        x -= err / normal_pdf(x);
    }
    return x;
}

}  // namespace riskbound
