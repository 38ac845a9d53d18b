#include "depstat/benchgen.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace depstat {

namespace {

// Two-Gaussian mixture parameters: unit variance requires mu^2 + s0^2 = 1.
constexpr double kMixSigma0 = 0.5;
const double kMixMu = std::sqrt(1.0 - kMixSigma0 * kMixSigma0);

double draw_one(SourceDensity density, RngStream& rng) {
    switch (density) {
        case SourceDensity::TwoGaussianMix: {
            const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            return sign * kMixMu + kMixSigma0 * rng.normal();
        }
        case SourceDensity::Laplace: {
            // inverse CDF; scale 1/sqrt(2) gives unit variance
            const double u = rng.uniform01_open() - 0.5;
            const double mag = std::log(1.0 - 2.0 * std::fabs(u));
            return (u < 0.0 ? mag : -mag) / std::sqrt(2.0);
        }
        case SourceDensity::Uniform:
            return (2.0 * rng.uniform01() - 1.0) * std::sqrt(3.0);
        case SourceDensity::StudentT5: {
            // normal over sqrt(chi^2_5 / 5), then scale to unit variance
            const double z = rng.normal();
            double chi2 = 0.0;
            for (int k = 0; k < 5; ++k) {
                const double w = rng.normal();
                chi2 += w * w;
            }
            return z / std::sqrt(chi2 / 5.0) * std::sqrt(3.0 / 5.0);
        }
        case SourceDensity::ExpCentered:
            return rng.exponential() - 1.0;
    }
    throw InvalidInputError("unknown source density");
}

}  // namespace

std::string_view source_density_name(SourceDensity density) {
    switch (density) {
        case SourceDensity::TwoGaussianMix: return "gauss-mix";
        case SourceDensity::Laplace: return "laplace";
        case SourceDensity::Uniform: return "uniform";
        case SourceDensity::StudentT5: return "student-t5";
        case SourceDensity::ExpCentered: return "exp";
    }
    throw InvalidInputError("unknown source density");
}

SourceDensity parse_source_density(std::string_view token) {
    for (SourceDensity d : kDensityCatalog)
        if (token == source_density_name(d))
            return d;
    throw InvalidInputError("unknown source density '" + std::string(token) + "'");
}

void MixConfig::validate() const {
    // accept rounded spellings of pi/4 such as 0.7854
    if (!(theta >= 0.0 && theta <= std::numbers::pi_v<double> / 4.0 + 1e-3))
        throw InvalidInputError("theta must lie in [0, pi/4]");
    if (d != 1 && d != 2 && d != 4)
        throw InvalidInputError("d must be one of {1, 2, 4}");
    if (n < 2)
        throw InvalidInputError("n must be >= 2");
}

std::vector<double> sample_source(SourceDensity density, int n, RngStream& rng) {
    if (n < 1)
        throw InvalidInputError("sample_source: need n >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& v : out)
        v = draw_one(density, rng);
    return out;
}

std::pair<std::vector<double>, std::vector<double>>
rotate_pair(const std::vector<double>& x, const std::vector<double>& y, double theta) {
    if (x.size() != y.size())
        throw InvalidInputError("rotate_pair: length mismatch");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<double> xr(x.size()), yr(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xr[i] = c * x[i] - s * y[i];
        yr[i] = s * x[i] + c * y[i];
    }
    return {std::move(xr), std::move(yr)};
}

Eigen::MatrixXd random_orthogonal(int d, RngStream& rng) {
    if (d < 1)
        throw InvalidInputError("random_orthogonal: need d >= 1");
    Eigen::MatrixXd g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            g(i, j) = rng.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fixing the sign of R's diagonal makes the decomposition unique and the
    // resulting Q exactly Haar distributed.
    for (int j = 0; j < d; ++j)
        if (r(j, j) < 0.0)
            q.col(j) = -q.col(j);
    return q;
}

namespace detail {

Eigen::MatrixXd orthogonal_mix(const Eigen::MatrixXd& padded, const Eigen::MatrixXd& q) {
    return padded * q.transpose();
}

}  // namespace detail

PairedSample embed_mix(const std::vector<double>& x, const std::vector<double>& y, int d,
                       std::uint64_t seed) {
    if (x.size() != y.size())
        throw InvalidInputError("embed_mix: length mismatch");
    if (d != 1 && d != 2 && d != 4)
        throw InvalidInputError("embed_mix: d must be one of {1, 2, 4}");
    const int n = static_cast<int>(x.size());
    const Eigen::Map<const Eigen::MatrixXd> xm(x.data(), n, 1);
    const Eigen::Map<const Eigen::MatrixXd> ym(y.data(), n, 1);
    if (d == 1)
        return PairedSample(xm, ym);

    const auto pad_and_mix = [&](const Eigen::Map<const Eigen::MatrixXd>& base,
                                 const char* pad_label, const char* orth_label) {
        RngStream pad(seed, pad_label);
        RngStream orth(seed, orth_label);
        Eigen::MatrixXd padded(n, d);
        padded.col(0) = base;
        for (int j = 1; j < d; ++j)
            for (int i = 0; i < n; ++i)
                padded(i, j) = pad.normal();
        return detail::orthogonal_mix(padded, random_orthogonal(d, orth));
    };
    return PairedSample(pad_and_mix(xm, "pad-x", "orth-x"),
                        pad_and_mix(ym, "pad-y", "orth-y"));
}

PairedSample generate_instance(const MixConfig& config) {
    config.validate();
    RngStream sx(config.seed, "source-x");
    RngStream sy(config.seed, "source-y");
    const std::vector<double> x = sample_source(config.density_x, config.n, sx);
    const std::vector<double> y = sample_source(config.density_y, config.n, sy);
    const auto [xr, yr] = rotate_pair(x, y, config.theta);
    return embed_mix(xr, yr, config.d, config.seed);
}

}  // namespace depstat
