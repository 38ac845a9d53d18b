#pragma once

namespace depstat {

/// Inverse of the standard normal CDF, computed by Wichura's AS 241
/// rational approximation (PPND16 variant, relative error below 1e-15
/// on (1e-300, 1-1e-16)). Returns +/-infinity at p = 1 / p = 0 and NaN
/// outside [0, 1].
double inverse_normal_cdf(double p);

/// Standard normal CDF via erfc. Used as the independent counterpart of
/// inverse_normal_cdf in round-trip checks.
double normal_cdf(double x);

}  // namespace depstat
