#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "depstat/benchgen.hpp"
#include "oracles.hpp"

using namespace depstat;

TEST_CASE("every catalog density has zero mean and unit variance") {
    const int n = 100000;
    for (SourceDensity density : kDensityCatalog) {
        RngStream rng(2024, std::string("moments-") + std::string(source_density_name(density)));
        const std::vector<double> draws = sample_source(density, n, rng);
        double sum = 0.0, sumsq = 0.0;
        for (double v : draws) {
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / n;
        const double var = sumsq / n - mean * mean;
        INFO("density ", source_density_name(density));
        CHECK(std::fabs(mean) < 0.02);
        CHECK(std::fabs(var - 1.0) < 0.03);
    }
}

TEST_CASE("uniform draws stay inside the unit-variance support") {
    RngStream rng(5, "uniform-support");
    const double bound = std::sqrt(3.0);
    for (double v : sample_source(SourceDensity::Uniform, 100000, rng)) {
        CHECK(v >= -bound);
        CHECK(v <= bound);
    }
}

TEST_CASE("density tokens round-trip") {
    for (SourceDensity d : kDensityCatalog)
        CHECK(parse_source_density(source_density_name(d)) == d);
    CHECK_THROWS_AS(parse_source_density("cauchy"), InvalidInputError);
}

TEST_CASE("rotation by zero is the identity and by pi/2 swaps with a sign") {
    const std::vector<double> x = {1.0, -2.0, 0.5};
    const std::vector<double> y = {0.3, 0.7, -1.1};
    const auto [x0, y0] = rotate_pair(x, y, 0.0);
    CHECK(x0 == x);
    CHECK(y0 == y);

    const auto [xq, yq] = rotate_pair(x, y, std::numbers::pi_v<double> / 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(xq[i] == doctest::Approx(-y[i]).epsilon(1e-14));
        CHECK(yq[i] == doctest::Approx(x[i]).epsilon(1e-14));
    }
}

TEST_CASE("rotation preserves per-sample norms") {
    RngStream rng(6, "rot-norm");
    std::vector<double> x(50), y(50);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    for (double theta : {0.1, 0.5, std::numbers::pi_v<double> / 4.0}) {
        const auto [xr, yr] = rotate_pair(x, y, theta);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double before = std::hypot(x[i], y[i]);
            const double after = std::hypot(xr[i], yr[i]);
            CHECK(after == doctest::Approx(before).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(rotate_pair({1.0}, {1.0, 2.0}, 0.3), InvalidInputError);
}

TEST_CASE("random orthogonal matrices satisfy the group contracts") {
    RngStream rng(7, "orth");
    bool saw_plus = false, saw_minus = false;
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXd q1 = random_orthogonal(1, rng);
        CHECK(std::fabs(std::fabs(q1(0, 0)) - 1.0) < 1e-14);
        saw_plus = saw_plus || q1(0, 0) > 0.0;
        saw_minus = saw_minus || q1(0, 0) < 0.0;
    }
    CHECK(saw_plus);
    CHECK(saw_minus);

    for (int d : {2, 4}) {
        for (int rep = 0; rep < 20; ++rep) {
            const Eigen::MatrixXd q = random_orthogonal(d, rng);
            const Eigen::MatrixXd gap =
                q.transpose() * q - Eigen::MatrixXd::Identity(d, d);
            CHECK(gap.cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::fabs(std::fabs(q.determinant()) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("2-d orthogonal rotation angles are uniform") {
    RngStream rng(8, "haar-angle");
    const int bins = 16;
    const int draws = 10000;
    std::vector<int> counts(bins, 0);
    const double two_pi = 2.0 * std::numbers::pi_v<double>;
    for (int i = 0; i < draws; ++i) {
        Eigen::MatrixXd q = random_orthogonal(2, rng);
        if (q.determinant() < 0.0)
            q.col(1) = -q.col(1);  // fold reflections onto rotations
        double angle = std::atan2(q(1, 0), q(0, 0));
        if (angle < 0.0)
            angle += two_pi;
        const int bin = std::min(bins - 1, static_cast<int>(angle / two_pi * bins));
        ++counts[static_cast<std::size_t>(bin)];
    }
    const double expected = static_cast<double>(draws) / bins;
    double chi2 = 0.0;
    for (int c : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    // p > 0.001 <=> statistic below the 0.999 quantile of chi^2(15)
    const boost::math::chi_squared_distribution<double> dist(bins - 1);
    CHECK(chi2 < boost::math::quantile(dist, 0.999));
}

TEST_CASE("embed_mix passes univariate input through untouched") {
    const std::vector<double> x = {0.1, -0.4, 2.0};
    const std::vector<double> y = {1.0, 0.0, -3.0};
    const PairedSample s = embed_mix(x, y, 1, 77);
    for (int i = 0; i < 3; ++i) {
        CHECK(s.x(i, 0) == x[static_cast<std::size_t>(i)]);
        CHECK(s.y(i, 0) == y[static_cast<std::size_t>(i)]);
    }
    CHECK_THROWS_AS(embed_mix(x, y, 3, 0), InvalidInputError);
    CHECK_THROWS_AS(embed_mix({1.0, 2.0}, {1.0}, 1, 0), InvalidInputError);
}

TEST_CASE("orthogonal mixing preserves per-sample norms") {
    RngStream rng(9, "mix-norm");
    const Eigen::MatrixXd padded = oracle::random_matrix(rng, 50, 4);
    const Eigen::MatrixXd q = random_orthogonal(4, rng);
    const Eigen::MatrixXd mixed = detail::orthogonal_mix(padded, q);
    for (int i = 0; i < padded.rows(); ++i)
        CHECK(mixed.row(i).norm() == doctest::Approx(padded.row(i).norm()).epsilon(1e-12));
}

TEST_CASE("embed_mix output shape and row-norm isometry against the padded construction") {
    const std::vector<double> x = {0.1, -0.4, 2.0, 1.3};
    const std::vector<double> y = {1.0, 0.0, -3.0, 0.2};
    const PairedSample s = embed_mix(x, y, 4, 123);
    CHECK(s.n() == 4);
    CHECK(s.p() == 4);
    CHECK(s.q() == 4);
    // rebuild the padded matrix from the same substream and compare norms
    RngStream pad(123, "pad-x");
    Eigen::MatrixXd padded(4, 4);
    for (int i = 0; i < 4; ++i)
        padded(i, 0) = x[static_cast<std::size_t>(i)];
    for (int j = 1; j < 4; ++j)
        for (int i = 0; i < 4; ++i)
            padded(i, j) = pad.normal();
    for (int i = 0; i < 4; ++i)
        CHECK(s.x.row(i).norm() == doctest::Approx(padded.row(i).norm()).epsilon(1e-12));
}

TEST_CASE("generate_instance is deterministic and validates its config") {
    MixConfig config;
    config.theta = 0.3;
    config.d = 2;
    config.n = 40;
    config.seed = 31;
    const PairedSample a = generate_instance(config);
    const PairedSample b = generate_instance(config);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.n() == 40);
    CHECK(a.p() == 2);

    MixConfig bad = config;
    bad.theta = 1.0;  // > pi/4
    CHECK_THROWS_AS(generate_instance(bad), InvalidInputError);
    bad = config;
    bad.d = 3;
    CHECK_THROWS_AS(generate_instance(bad), InvalidInputError);
    bad = config;
    bad.n = 1;
    CHECK_THROWS_AS(generate_instance(bad), InvalidInputError);
}

TEST_CASE("different seeds give different instances") {
    MixConfig config;
    config.n = 20;
    config.seed = 1;
    MixConfig other = config;
    other.seed = 2;
    CHECK(generate_instance(config).x != generate_instance(other).x);
}
