#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depstat/sample.hpp"

namespace depstat {

/// The dependence statistics this library implements.
enum class StatKind {
    DCov,           // distance covariance V^2_n
    DCor,           // distance correlation R^2_n
    HsicBiased,     // Gaussian-kernel HSIC, V-statistic form
    HsicUnbiased,   // Gaussian-kernel HSIC, distinct-tuple U-statistic form
    FeuervergerT1,  // rank normal-score statistic T^(1)_n (univariate)
};

/// CLI/report token for a statistic ("dcov", "dcor", "hsic", "hsic-u",
/// "feuerverger").
std::string_view stat_kind_name(StatKind kind);

/// Inverse of stat_kind_name. Throws InvalidInputError on unknown tokens.
StatKind parse_stat_kind(std::string_view token);

/// A computed statistic. DCov, DCor, HsicBiased and FeuervergerT1 are
/// clamped-nonnegative; DCor additionally lies in [0, 1]. HsicUnbiased may
/// be negative.
struct StatValue {
    double value = 0.0;
    StatKind kind = StatKind::DCov;
    int n = 0;
};

/// Distance covariance V^2_n(X, Y): the three-term V-statistic over
/// products of pairwise Euclidean distances, computed in the O(n^2)
/// double-centered form. Nonnegative (cancellation noise clamped to 0).
StatValue dcov_v2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Distance correlation R^2_n = V^2_n(X,Y) / sqrt(V^2_n(X,X) V^2_n(Y,Y)),
/// in [0, 1]; defined as 0 when the denominator vanishes.
StatValue dcor_r2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Biased HSIC estimate: the three-term Gram sum, computed as
/// (1/n^2) tr(K H L H) with H = I - (1/n) 1 1^T.
StatValue hsic_biased(const GramMatrix& k, const GramMatrix& l);

/// Unbiased HSIC estimate: each of the three sums taken over tuples of
/// pairwise-distinct indices with falling-factorial normalizers. Requires
/// n >= 4; may be negative; expectation 0 under independence.
StatValue hsic_unbiased(const GramMatrix& k, const GramMatrix& l);

/// Feuerverger's rank statistic: pi^2 times the distance-covariance form
/// of the rank normal scores of two univariate samples.
StatValue feuerverger_t1(const std::vector<double>& x, const std::vector<double>& y);

/// Test-support oracle: numerically integrates the weighted squared
/// distance between the empirical joint characteristic function and the
/// product of the empirical marginals,
///     integral |f_XY(s,t) - f_X(s) f_Y(t)|^2 W(s,t) ds dt,
/// with W the Bochner measure of the Gaussian-kernel product,
///     W(s,t) = (sx sy / 2 pi) exp(-sx^2 s^2 / 2 - sy^2 t^2 / 2).
/// Must agree with hsic_biased on Grams built with the same bandwidths.
/// Restricted to n <= 10; throws OracleFailureError if the adaptive
/// quadrature does not converge.
double charfn_hsic_oracle(const std::vector<double>& x, const std::vector<double>& y,
                          const Bandwidth& sigma_x, const Bandwidth& sigma_y);

/// A statistic precomputed so that evaluating it on (x, y permuted by pi)
/// costs a single O(n^2) pass. Kernel bandwidths are resolved once, on the
/// original marginals, at preparation time. Immutable after construction;
/// eval_permuted is const and safe to call concurrently.
class PreparedStat {
  public:
    /// Builds the evaluation plan. `fixed_bandwidths`, when set, overrides
    /// the per-marginal median heuristic for the kernel statistics.
    static PreparedStat prepare(const PairedSample& sample, StatKind kind,
                                std::optional<std::pair<double, double>> fixed_bandwidths = {});

    StatKind kind() const { return kind_; }
    int n() const { return n_; }

    /// Resolved kernel bandwidths; empty for the distance/rank statistics.
    std::optional<double> bandwidth_x() const { return bw_x_; }
    std::optional<double> bandwidth_y() const { return bw_y_; }

    /// The statistic on the sample as given.
    StatValue observed() const;

    /// The statistic on (x, y[perm]); perm must be a permutation of 0..n-1.
    StatValue eval_permuted(std::span<const int> perm) const;

  private:
    PreparedStat() = default;

    StatKind kind_ = StatKind::DCov;
    int n_ = 0;
    Eigen::MatrixXd a_;   // x-side matrix (centered or zero-diagonal, per kind)
    Eigen::MatrixXd b_;   // y-side matrix (raw distances/Gram, per kind)
    Eigen::VectorXd arow_sums_;  // unbiased HSIC: row sums of a_
    Eigen::VectorXd brow_sums_;  // unbiased HSIC: row sums of b_
    double denom_ = 1.0;  // DCor: V^2(x,x) * V^2(y,y)
    double scale_ = 1.0;  // FeuervergerT1: pi^2
    std::optional<double> bw_x_;
    std::optional<double> bw_y_;
};

}  // namespace depstat
