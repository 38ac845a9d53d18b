#include "depstat/sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "depstat/normal.hpp"

namespace depstat {

PairedSample::PairedSample(Eigen::MatrixXd x_in, Eigen::MatrixXd y_in)
    : x(std::move(x_in)), y(std::move(y_in)) {
    if (x.rows() != y.rows())
        throw InvalidInputError("paired sample: x and y row counts differ");
    if (x.rows() < 2)
        throw InvalidInputError("paired sample: need n >= 2");
    if (x.cols() < 1 || y.cols() < 1)
        throw InvalidInputError("paired sample: need p, q >= 1");
    if (!x.allFinite() || !y.allFinite())
        throw InvalidInputError("paired sample: non-finite entries");
}

DistanceMatrix pairwise_distances(const Eigen::MatrixXd& points) {
    const int n = static_cast<int>(points.rows());
    if (n < 2)
        throw InvalidInputError("pairwise_distances: need n >= 2");
    if (!points.allFinite())
        throw InvalidInputError("pairwise_distances: non-finite entries");

    DistanceMatrix out;
    out.d = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i < n; ++i) {
            const double dist = (points.row(i) - points.row(j)).norm();
            out.d(i, j) = dist;
            out.d(j, i) = dist;
        }
    }
    return out;
}

Bandwidth median_heuristic(const DistanceMatrix& d) {
    const int n = d.n();
    if (n < 2)
        throw InvalidInputError("median_heuristic: need n >= 2");

    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int j = 0; j < n; ++j)
        for (int i = j + 1; i < n; ++i)
            upper.push_back(d.d(i, j));

    const std::size_t m = upper.size();
    std::nth_element(upper.begin(), upper.begin() + m / 2, upper.end());
    double med = upper[m / 2];
    if (m % 2 == 0) {
        // mean of the two middle order statistics
        const double lo = *std::max_element(upper.begin(), upper.begin() + m / 2);
        med = 0.5 * (lo + med);
    }
    if (med > 0.0)
        return Bandwidth(med);

    // Degenerate fallbacks: smallest nonzero distance, then 1.
    double smallest = std::numeric_limits<double>::infinity();
    for (double v : upper)
        if (v > 0.0)
            smallest = std::min(smallest, v);
    return Bandwidth(std::isfinite(smallest) ? smallest : 1.0);
}

GramMatrix gaussian_gram(const DistanceMatrix& d, const Bandwidth& sigma) {
    GramMatrix out;
    out.bandwidth = sigma.sigma;
    const double inv2s2 = 1.0 / (2.0 * sigma.sigma * sigma.sigma);
    out.k = (-d.d.array().square() * inv2s2).exp().matrix();
    return out;
}

std::vector<double> rank_normal_scores(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    if (n < 2)
        throw InvalidInputError("rank_normal_scores: need n >= 2");
    for (double x : v)
        if (!std::isfinite(x))
            throw InvalidInputError("rank_normal_scores: non-finite entries");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return v[a] < v[b]; });

    // Midranks for ties: every member of a tie block gets the mean of the
    // 1-based ranks the block spans.
    std::vector<double> rank(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]])
            ++j;
        const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (int k = i; k <= j; ++k)
            rank[order[k]] = mid;
        i = j + 1;
    }

    std::vector<double> scores(n);
    const double denom = n + 0.25;
    for (int k = 0; k < n; ++k)
        scores[k] = inverse_normal_cdf((rank[k] - 0.375) / denom);
    return scores;
}

}  // namespace depstat
