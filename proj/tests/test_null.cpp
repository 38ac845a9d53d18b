#include <doctest.h>

#include <cmath>
#include <numeric>

#include "depstat/null_test.hpp"
#include "oracles.hpp"

using namespace depstat;

namespace {

PairedSample small_sample(std::uint64_t seed, int n = 16) {
    RngStream rng(seed, "null-sample");
    return PairedSample(oracle::random_matrix(rng, n, 1), oracle::random_matrix(rng, n, 1));
}

detail::PermProvider identity_provider() {
    return [](int n, int) {
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        return p;
    };
}

}  // namespace

TEST_CASE("empirical quantile follows the ceiling order statistic") {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);  // 1..100
    CHECK(empirical_quantile(v, 0.95) == 95.0);
    CHECK(empirical_quantile(v, 0.999) == 100.0);
    CHECK(empirical_quantile(v, 0.001) == 1.0);

    const std::vector<double> single = {7.5};
    CHECK(empirical_quantile(single, 0.01) == 7.5);
    CHECK(empirical_quantile(single, 0.99) == 7.5);

    const std::vector<double> three = {3.0, 1.0, 2.0};
    CHECK(empirical_quantile(three, 0.5) == 2.0);

    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), InvalidInputError);
}

TEST_CASE("permutation null with a forced identity permutation reproduces the observed value") {
    const PairedSample s = small_sample(1);
    TestConfig config;
    config.stat = StatKind::DCov;
    config.permutations = 1;
    const PreparedStat prepared = PreparedStat::prepare(s, config.stat);
    const NullEstimate null =
        detail::permutation_null_with(prepared, config, identity_provider());
    CHECK(null.values.size() == 1);
    CHECK(null.values[0] == prepared.observed().value);
    CHECK(null.threshold == null.values[0]);
}

TEST_CASE("permutation null is deterministic in the seed") {
    const PairedSample s = small_sample(2);
    TestConfig config;
    config.stat = StatKind::HsicBiased;
    config.permutations = 25;
    config.seed = 99;
    const NullEstimate a = permutation_null(s, config);
    const NullEstimate b = permutation_null(s, config);
    CHECK(a.values == b.values);
    CHECK(a.threshold == b.threshold);

    config.seed = 100;
    const NullEstimate c = permutation_null(s, config);
    CHECK(a.values != c.values);
}

TEST_CASE("permutation p-value counting formula") {
    std::vector<double> nulls(200);
    std::iota(nulls.begin(), nulls.end(), 1.0);  // 1..200

    // observed above every null value
    CHECK(detail::permutation_p_value(nulls, 500.0) == doctest::Approx(1.0 / 201.0));
    // observed below every null value
    CHECK(detail::permutation_p_value(nulls, 0.5) == 1.0);
    // ties count toward the null
    const std::vector<double> tied(200, 3.25);
    CHECK(detail::permutation_p_value(tied, 3.25) == 1.0);
}

TEST_CASE("permutation test end-to-end invariants") {
    const PairedSample s = small_sample(3, 24);
    TestConfig config;
    config.stat = StatKind::DCov;
    config.permutations = 99;
    config.seed = 5;
    const TestResult r = permutation_test(s, config);
    CHECK(r.p_value >= 1.0 / 100.0);
    CHECK(r.p_value <= 1.0);
    CHECK(r.reject == (r.statistic.value > r.threshold));
    CHECK(r.null_estimate.values.size() == 99);

    // strongly dependent data: y = x, dcov observed should beat the null
    Eigen::MatrixXd x(24, 1);
    for (int i = 0; i < 24; ++i)
        x(i, 0) = std::sin(i * 1.7) + 0.1 * i;
    const PairedSample dep(x, x);
    const TestResult rd = permutation_test(dep, config);
    CHECK(rd.reject);
    CHECK(rd.p_value == doctest::Approx(1.0 / 100.0));
}

TEST_CASE("p-value is monotone in the observed statistic") {
    RngStream rng(4, "mono");
    std::vector<double> nulls(150);
    for (auto& v : nulls)
        v = rng.exponential();
    double prev = 2.0;
    for (double obs = 0.0; obs < 5.0; obs += 0.05) {
        const double p = detail::permutation_p_value(nulls, obs);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("gamma moment fit recovers synthetic Gamma(2, 3) parameters") {
    RngStream rng(6, "gamma-fit");
    std::vector<double> values(5000);
    for (auto& v : values)
        v = 3.0 * (rng.exponential() + rng.exponential());  // Gamma(shape 2, scale 3)
    const GammaFit fit = fit_gamma_moments(values);
    CHECK(std::fabs(fit.shape - 2.0) < 0.3);   // 15%
    CHECK(std::fabs(fit.scale - 3.0) < 0.45);  // 15%
}

TEST_CASE("gamma fit exponential special case matches the closed form") {
    // mean 2 and sample variance 4 -> shape 1, scale 2
    const double r3 = std::sqrt(3.0);
    const std::vector<double> values = {2.0 - r3, 2.0 - r3, 2.0 + r3, 2.0 + r3};
    const GammaFit fit = fit_gamma_moments(values);
    CHECK(fit.shape == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.scale == doctest::Approx(2.0).epsilon(1e-12));
    const double threshold = gamma_quantile(fit, 0.95);
    CHECK(std::fabs(threshold - (-2.0 * std::log(0.05))) < 1e-6);
    CHECK(std::fabs(threshold - 5.991464547107982) < 1e-6);
    CHECK(gamma_upper_tail(fit, threshold) == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("gamma fit rejects degenerate input") {
    CHECK_THROWS_AS(fit_gamma_moments(std::vector<double>{1.0}), DegenerateNullError);
    CHECK_THROWS_AS(fit_gamma_moments(std::vector<double>{1.0, 1.0, 1.0}), DegenerateNullError);
}

TEST_CASE("gamma test supports only the biased hsic statistic") {
    const PairedSample s = small_sample(7);
    TestConfig config;
    config.null_model = NullModel::Gamma;
    config.stat = StatKind::DCov;
    CHECK_THROWS_AS(gamma_test(s, config), UnsupportedStatisticError);
}

TEST_CASE("gamma test raises a degenerate-null error on constant y") {
    Eigen::MatrixXd x(8, 1), y(8, 1);
    for (int i = 0; i < 8; ++i)
        x(i, 0) = std::cos(2.1 * i);
    y.setConstant(1.0);
    TestConfig config;
    config.null_model = NullModel::Gamma;
    config.stat = StatKind::HsicBiased;
    CHECK_THROWS_AS(gamma_test(PairedSample(x, y), config), DegenerateNullError);
}

TEST_CASE("gamma test produces a coherent result on dependent data") {
    Eigen::MatrixXd x(40, 1);
    for (int i = 0; i < 40; ++i)
        x(i, 0) = std::sin(0.63 * i) + 0.05 * i;
    const PairedSample dep(x, x);
    TestConfig config;
    config.null_model = NullModel::Gamma;
    config.stat = StatKind::HsicBiased;
    config.seed = 11;
    const TestResult r = gamma_test(dep, config);
    CHECK(r.null_estimate.gamma_shape > 0.0);
    CHECK(r.null_estimate.gamma_scale > 0.0);
    CHECK(r.reject);
    CHECK(r.p_value < 0.05);
    CHECK(r.reject == (r.statistic.value > r.threshold));

    // deterministic rerun
    const TestResult r2 = gamma_test(dep, config);
    CHECK(r.statistic.value == r2.statistic.value);
    CHECK(r.threshold == r2.threshold);
    CHECK(r.p_value == r2.p_value);
}

TEST_CASE("test config validation") {
    const PairedSample s = small_sample(8);
    TestConfig config;
    config.alpha = 0.0;
    CHECK_THROWS_AS(permutation_test(s, config), InvalidInputError);
    config.alpha = 1.0;
    CHECK_THROWS_AS(permutation_test(s, config), InvalidInputError);
    config.alpha = 0.05;
    config.permutations = 0;
    CHECK_THROWS_AS(permutation_test(s, config), InvalidInputError);
}

TEST_CASE("feuerverger permutation test rejects multivariate input") {
    RngStream rng(9, "dims");
    const PairedSample wide(oracle::random_matrix(rng, 10, 2),
                            oracle::random_matrix(rng, 10, 1));
    TestConfig config;
    config.stat = StatKind::FeuervergerT1;
    CHECK_THROWS_AS(permutation_test(wide, config), UnsupportedDimensionError);
}

TEST_CASE("fixed bandwidths are honored and echoed") {
    const PairedSample s = small_sample(10);
    TestConfig config;
    config.stat = StatKind::HsicBiased;
    config.fixed_bandwidths = std::make_pair(0.7, 1.4);
    config.permutations = 10;
    const TestResult r = permutation_test(s, config);
    CHECK(r.bandwidth_x == 0.7);
    CHECK(r.bandwidth_y == 1.4);
    // non-kernel statistics carry no bandwidths
    TestConfig dc;
    dc.stat = StatKind::DCov;
    dc.permutations = 10;
    const TestResult rd = permutation_test(s, dc);
    CHECK(!rd.bandwidth_x.has_value());
    CHECK(!rd.bandwidth_y.has_value());
}
