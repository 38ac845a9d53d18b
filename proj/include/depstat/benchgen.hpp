#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depstat/rng.hpp"
#include "depstat/sample.hpp"

namespace depstat {

/// Benchmark source densities. All are standardized to zero mean and unit
/// variance analytically; the catalog covers multimodal, super-Gaussian,
/// sub-Gaussian and skewed unimodal shapes.
enum class SourceDensity {
    TwoGaussianMix,  // 0.5 N(-mu, s0^2) + 0.5 N(+mu, s0^2), s0 = 0.5, mu = sqrt(0.75)
    Laplace,         // scale 1/sqrt(2)
    Uniform,         // on [-sqrt(3), sqrt(3)]
    StudentT5,       // t with 5 dof, scaled by sqrt(3/5)
    ExpCentered,     // Exp(1) - 1
};

inline constexpr std::array<SourceDensity, 5> kDensityCatalog = {
    SourceDensity::TwoGaussianMix, SourceDensity::Laplace, SourceDensity::Uniform,
    SourceDensity::StudentT5, SourceDensity::ExpCentered};

std::string_view source_density_name(SourceDensity density);
SourceDensity parse_source_density(std::string_view token);

/// One benchmark instance: two sources rotated by theta and embedded in d
/// dimensions. Dependence grows with theta; theta = 0 gives independent
/// marginals by construction.
struct MixConfig {
    double theta = 0.0;  // in [0, pi/4]
    int d = 1;           // in {1, 2, 4}
    int n = 128;
    SourceDensity density_x = SourceDensity::TwoGaussianMix;
    SourceDensity density_y = SourceDensity::TwoGaussianMix;
    std::uint64_t seed = 0;

    void validate() const;
};

/// n i.i.d. draws from the given standardized density.
std::vector<double> sample_source(SourceDensity density, int n, RngStream& rng);

/// Rotates each pair (x_i, y_i) by theta:
///   x' = cos(theta) x - sin(theta) y,  y' = sin(theta) x + cos(theta) y.
std::pair<std::vector<double>, std::vector<double>>
rotate_pair(const std::vector<double>& x, const std::vector<double>& y, double theta);

/// Haar-uniform random d x d orthogonal matrix: QR of a standard Gaussian
/// matrix with the sign of R's diagonal folded into Q.
Eigen::MatrixXd random_orthogonal(int d, RngStream& rng);

/// Embeds the rotated univariate pair into d dimensions: pads with
/// independent standard Gaussian columns and applies independent Haar
/// orthogonal mixes per side ([x | G] Qx^T, [y | G'] Qy^T). d = 1 returns
/// the inputs unchanged as n x 1 matrices. Substreams: (seed, "pad-x"),
/// (seed, "pad-y"), (seed, "orth-x"), (seed, "orth-y").
PairedSample embed_mix(const std::vector<double>& x, const std::vector<double>& y, int d,
                       std::uint64_t seed);

/// Full benchmark pipeline: sample both sources ((seed, "source-x") and
/// (seed, "source-y")), rotate by theta, embed in d dimensions.
PairedSample generate_instance(const MixConfig& config);

namespace detail {

/// Applies the orthogonal mix to pre-padded rows; exposed so the isometry
/// contract is directly testable.
Eigen::MatrixXd orthogonal_mix(const Eigen::MatrixXd& padded, const Eigen::MatrixXd& q);

}  // namespace detail

}  // namespace depstat
