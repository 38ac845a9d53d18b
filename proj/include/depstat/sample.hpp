#pragma once

#include <Eigen/Dense>
#include <vector>

#include "depstat/error.hpp"

namespace depstat {

/// Strictly positive Gaussian kernel bandwidth, in the units of the input
/// coordinates.
struct Bandwidth {
    double sigma = 1.0;

    explicit Bandwidth(double s) : sigma(s) {
        if (!(s > 0.0))
            throw InvalidBandwidthError("bandwidth must be > 0");
    }
};

/// n x n matrix of pairwise Euclidean distances. Symmetric, zero diagonal,
/// nonnegative entries.
struct DistanceMatrix {
    Eigen::MatrixXd d;

    int n() const { return static_cast<int>(d.rows()); }
};

/// n x n Gaussian kernel matrix together with the bandwidth it was built
/// with. Symmetric, unit diagonal, entries in (0, 1], positive semidefinite.
struct GramMatrix {
    Eigen::MatrixXd k;
    double bandwidth = 1.0;

    int n() const { return static_cast<int>(k.rows()); }
};

/// n paired observations, X in R^{n x p} and Y in R^{n x q}. The universal
/// test input. Validates on construction: matching row counts, n >= 2, all
/// entries finite.
struct PairedSample {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;

    PairedSample(Eigen::MatrixXd x_in, Eigen::MatrixXd y_in);

    int n() const { return static_cast<int>(x.rows()); }
    int p() const { return static_cast<int>(x.cols()); }
    int q() const { return static_cast<int>(y.cols()); }
};

/// Pairwise Euclidean distances between the rows of `points`. Requires
/// n >= 2 and finite entries.
DistanceMatrix pairwise_distances(const Eigen::MatrixXd& points);

/// Median-heuristic bandwidth: median of the n(n-1)/2 strict upper-triangle
/// distances (even count: mean of the two middle values). Degenerate
/// fallback chain: zero median -> smallest nonzero distance -> 1.
Bandwidth median_heuristic(const DistanceMatrix& d);

/// Gaussian kernel matrix K_ij = exp(-D_ij^2 / (2 sigma^2)).
GramMatrix gaussian_gram(const DistanceMatrix& d, const Bandwidth& sigma);

/// Blom-style rank normal scores: Phi^{-1}((rank_i - 3/8) / (n + 1/4)),
/// ranks 1-based, ties resolved to midranks. Monotone in the input; for
/// distinct inputs the output multiset depends only on n.
std::vector<double> rank_normal_scores(const std::vector<double>& v);

}  // namespace depstat
