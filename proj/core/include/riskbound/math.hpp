#pragma once

namespace riskbound {

// Standard normal density and CDF.
double normal_pdf(double x);
double normal_cdf(double x);

// Inverse of the standard normal CDF for p in (0,1). Initial rational
// approximation refined by Newton steps against erfc; accurate to a few ulps
// over the range reachable from 53-bit uniforms.
double inverse_normal_cdf(double p);

}  // namespace riskbound
