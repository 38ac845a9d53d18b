#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depstat/stats.hpp"

namespace depstat {

enum class NullModel { Permutation, Gamma };

std::string_view null_model_name(NullModel model);
NullModel parse_null_model(std::string_view token);

/// Configuration of a single hypothesis test.
struct TestConfig {
    double alpha = 0.05;
    int permutations = 200;  // B, permutation null size
    NullModel null_model = NullModel::Permutation;
    StatKind stat = StatKind::HsicBiased;
    /// Kernel bandwidths; median heuristic per marginal when empty.
    std::optional<std::pair<double, double>> fixed_bandwidths;
    std::uint64_t seed = 0;
    /// B0: permutations used for the Gamma moment fit.
    int gamma_moment_perms = 50;

    void validate() const;
};

/// Estimated null distribution: either the B permutation statistics or a
/// moment-matched Gamma, plus the 1-alpha rejection threshold.
struct NullEstimate {
    NullModel model = NullModel::Permutation;
    std::vector<double> values;  // permutation statistics (Permutation only)
    double gamma_shape = 0.0;
    double gamma_scale = 0.0;
    double threshold = 0.0;
};

/// Decision surface of a test run. reject <=> statistic.value > threshold.
struct TestResult {
    StatValue statistic;
    double threshold = 0.0;
    double p_value = 1.0;
    bool reject = false;
    NullEstimate null_estimate;
    TestConfig config;
    std::optional<double> bandwidth_x;  // resolved kernel bandwidths, if any
    std::optional<double> bandwidth_y;
};

/// Order-statistic quantile: sort ascending and return the element at
/// 0-based index ceil(q*B) - 1, clamped to [0, B-1].
double empirical_quantile(std::span<const double> values, double q);

/// Moment-matched Gamma parameters (shape = m^2/v, scale = v/m).
struct GammaFit {
    double shape = 0.0;
    double scale = 0.0;
};

/// Fits a Gamma by matching mean/variance of `values`. Throws
/// DegenerateNullError when the sample variance is not positive.
GammaFit fit_gamma_moments(std::span<const double> values);

double gamma_quantile(const GammaFit& fit, double prob);

/// Upper tail P(G > x) of the fitted Gamma.
double gamma_upper_tail(const GammaFit& fit, double x);

/// B statistic values, each computed on (x, pi(y)) for an independently
/// drawn uniform permutation pi (substream (seed, "perm-<i>")). Kernel
/// bandwidths are resolved once on the original marginals and held fixed
/// across permutations. threshold = empirical (1-alpha) quantile.
NullEstimate permutation_null(const PairedSample& sample, const TestConfig& config);

/// Permutation test: p = (1 + #{null >= observed}) / (B + 1);
/// reject <=> observed > threshold.
TestResult permutation_test(const PairedSample& sample, const TestConfig& config);

/// Gamma-approximated test for the biased HSIC statistic: moments from
/// B0 permuted statistics, threshold from the fitted Gamma inverse CDF.
/// Throws UnsupportedStatisticError for statistics other than HsicBiased
/// and DegenerateNullError when the permuted statistics have zero variance.
TestResult gamma_test(const PairedSample& sample, const TestConfig& config);

/// Dispatches on config.null_model.
TestResult run_test(const PairedSample& sample, const TestConfig& config);

namespace detail {

/// Permutation provider: maps (n, permutation index) to a permutation of
/// 0..n-1. Tests inject deterministic stubs here.
using PermProvider = std::function<std::vector<int>(int n, int index)>;

PermProvider seeded_perm_provider(std::uint64_t seed);

NullEstimate permutation_null_with(const PreparedStat& prepared, const TestConfig& config,
                                   const PermProvider& provider);
TestResult permutation_test_with(const PairedSample& sample, const TestConfig& config,
                                 const PermProvider& provider);

/// p-value of `observed` against a permutation null (the +1 smoothing
/// convention; ties count toward the null).
double permutation_p_value(std::span<const double> null_values, double observed);

}  // namespace detail

}  // namespace depstat
