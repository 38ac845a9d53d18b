#include "depstat/stats.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace depstat {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

double clamp_nonneg(double v) {
    return v < 0.0 ? 0.0 : v;
}

double clamp_unit(double v) {
    if (v < 0.0)
        return 0.0;
    if (v > 1.0)
        return 1.0;
    return v;
}

// H m H with H = I - (1/n) 1 1^T, i.e. subtract row/column means, add back
// the grand mean.
Eigen::MatrixXd double_centered(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    const Eigen::VectorXd row_means = m.rowwise().mean();
    const Eigen::RowVectorXd col_means = m.colwise().mean();
    const double grand = m.mean();
    Eigen::MatrixXd out(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out(i, j) = m(i, j) - row_means(i) - col_means(j) + grand;
    return out;
}

// (1/n^2) sum_ij a_ij b_ij, accumulated per column. The loop shape matches
// mean_product_permuted so that the identity permutation reproduces this
// value bit for bit.
double mean_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(a.rows());
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const double* ac = a.col(j).data();
        const double* bc = b.col(j).data();
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += ac[i] * bc[i];
        total += acc;
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

// (1/n^2) sum_ij a_ij b_{perm(i), perm(j)}
double mean_product_permuted(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             std::span<const int> perm) {
    const int n = static_cast<int>(a.rows());
    const int* p = perm.data();
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const double* ac = a.col(j).data();
        const double* bc = b.col(p[j]).data();
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += ac[i] * bc[p[i]];
        total += acc;
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

Eigen::MatrixXd abs_diff_matrix(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            m(i, j) = std::fabs(v[i] - v[j]);
    return m;
}

Eigen::MatrixXd zero_diagonal(Eigen::MatrixXd m) {
    m.diagonal().setZero();
    return m;
}

std::vector<int> identity_perm(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// Unbiased HSIC from zero-diagonal Grams. The three distinct-tuple sums
// reduce to tr(Kt Lt), 1^T Kt Lt 1 and (1^T Kt 1)(1^T Lt 1):
//   sum_{j,q,r distinct}   k_jq l_jr  = 1'KtLt1 - tr(KtLt)
//   sum_{j,k,q,r distinct} k_jk l_qr  = (1'Kt1)(1'Lt1) - 4 1'KtLt1 + 2 tr(KtLt)
double hsic_unbiased_terms(const Eigen::MatrixXd& kt, const Eigen::MatrixXd& lt,
                           const Eigen::VectorXd& krow, const Eigen::VectorXd& lrow,
                           std::span<const int> perm) {
    const int n = static_cast<int>(kt.rows());
    const int* p = perm.data();

    double trace = 0.0;  // sum_ij kt_ij lt_{perm(i) perm(j)}
    for (int j = 0; j < n; ++j) {
        const double* kc = kt.col(j).data();
        const double* lc = lt.col(p[j]).data();
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += kc[i] * lc[p[i]];
        trace += acc;
    }

    double cross = 0.0;  // 1' Kt Lt' 1 = sum_j (Kt 1)_j (Lt 1)_{perm(j)}
    for (int j = 0; j < n; ++j)
        cross += krow(j) * lrow(p[j]);

    const double sk = krow.sum();
    const double sl = lrow.sum();

    const double nd = static_cast<double>(n);
    const double f2 = nd * (nd - 1.0);
    const double f3 = f2 * (nd - 2.0);
    const double f4 = f3 * (nd - 3.0);
    return trace / f2 - 2.0 * (cross - trace) / f3 +
           (sk * sl - 4.0 * cross + 2.0 * trace) / f4;
}

}  // namespace

std::string_view stat_kind_name(StatKind kind) {
    switch (kind) {
        case StatKind::DCov: return "dcov";
        case StatKind::DCor: return "dcor";
        case StatKind::HsicBiased: return "hsic";
        case StatKind::HsicUnbiased: return "hsic-u";
        case StatKind::FeuervergerT1: return "feuerverger";
    }
    throw InvalidInputError("unknown statistic kind");
}

StatKind parse_stat_kind(std::string_view token) {
    if (token == "dcov") return StatKind::DCov;
    if (token == "dcor") return StatKind::DCor;
    if (token == "hsic") return StatKind::HsicBiased;
    if (token == "hsic-u") return StatKind::HsicUnbiased;
    if (token == "feuerverger") return StatKind::FeuervergerT1;
    throw InvalidInputError("unknown statistic '" + std::string(token) + "'");
}

PreparedStat PreparedStat::prepare(const PairedSample& sample, StatKind kind,
                                   std::optional<std::pair<double, double>> fixed_bandwidths) {
    PreparedStat ps;
    ps.kind_ = kind;
    ps.n_ = sample.n();

    switch (kind) {
        case StatKind::DCov: {
            ps.a_ = double_centered(pairwise_distances(sample.x).d);
            ps.b_ = pairwise_distances(sample.y).d;
            break;
        }
        case StatKind::DCor: {
            const Eigen::MatrixXd dx = pairwise_distances(sample.x).d;
            const Eigen::MatrixXd dy = pairwise_distances(sample.y).d;
            ps.a_ = double_centered(dx);
            ps.b_ = dy;
            const double vxx = clamp_nonneg(mean_product(ps.a_, dx));
            const double vyy = clamp_nonneg(mean_product(double_centered(dy), dy));
            // kept as the product so that R^2 = sqrt(num^2 / (vxx vyy))
            // evaluates to exactly 1 when x == y
            ps.denom_ = vxx * vyy;
            break;
        }
        case StatKind::HsicBiased:
        case StatKind::HsicUnbiased: {
            if (kind == StatKind::HsicUnbiased && sample.n() < 4)
                throw InsufficientSampleError("unbiased HSIC requires n >= 4");
            const DistanceMatrix dx = pairwise_distances(sample.x);
            const DistanceMatrix dy = pairwise_distances(sample.y);
            const Bandwidth bx = fixed_bandwidths ? Bandwidth(fixed_bandwidths->first)
                                                  : median_heuristic(dx);
            const Bandwidth by = fixed_bandwidths ? Bandwidth(fixed_bandwidths->second)
                                                  : median_heuristic(dy);
            ps.bw_x_ = bx.sigma;
            ps.bw_y_ = by.sigma;
            const Eigen::MatrixXd k = gaussian_gram(dx, bx).k;
            const Eigen::MatrixXd l = gaussian_gram(dy, by).k;
            if (kind == StatKind::HsicBiased) {
                ps.a_ = double_centered(k);
                ps.b_ = l;
            } else {
                ps.a_ = zero_diagonal(k);
                ps.b_ = zero_diagonal(l);
                ps.arow_sums_ = ps.a_.rowwise().sum();
                ps.brow_sums_ = ps.b_.rowwise().sum();
            }
            break;
        }
        case StatKind::FeuervergerT1: {
            if (sample.p() != 1 || sample.q() != 1)
                throw UnsupportedDimensionError(
                    "feuerverger statistic is defined for univariate samples only");
            const auto col = [](const Eigen::MatrixXd& m) {
                return std::vector<double>(m.data(), m.data() + m.rows());
            };
            ps.a_ = double_centered(abs_diff_matrix(rank_normal_scores(col(sample.x))));
            ps.b_ = abs_diff_matrix(rank_normal_scores(col(sample.y)));
            ps.scale_ = kPi * kPi;
            break;
        }
    }
    return ps;
}

StatValue PreparedStat::observed() const {
    return eval_permuted(identity_perm(n_));
}

StatValue PreparedStat::eval_permuted(std::span<const int> perm) const {
    double value = 0.0;
    switch (kind_) {
        case StatKind::DCov:
        case StatKind::HsicBiased:
            value = clamp_nonneg(mean_product_permuted(a_, b_, perm));
            break;
        case StatKind::DCor: {
            const double num = clamp_nonneg(mean_product_permuted(a_, b_, perm));
            value = denom_ > 0.0 ? clamp_unit(std::sqrt(num * num / denom_)) : 0.0;
            break;
        }
        case StatKind::HsicUnbiased:
            value = hsic_unbiased_terms(a_, b_, arow_sums_, brow_sums_, perm);
            break;
        case StatKind::FeuervergerT1:
            value = scale_ * clamp_nonneg(mean_product_permuted(a_, b_, perm));
            break;
    }
    return StatValue{value, kind_, n_};
}

StatValue dcov_v2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return PreparedStat::prepare(PairedSample(x, y), StatKind::DCov).observed();
}

StatValue dcor_r2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return PreparedStat::prepare(PairedSample(x, y), StatKind::DCor).observed();
}

StatValue hsic_biased(const GramMatrix& k, const GramMatrix& l) {
    if (k.n() != l.n())
        throw InvalidInputError("hsic: Gram matrices of different sizes");
    const double value = clamp_nonneg(mean_product(double_centered(k.k), l.k));
    return StatValue{value, StatKind::HsicBiased, k.n()};
}

StatValue hsic_unbiased(const GramMatrix& k, const GramMatrix& l) {
    if (k.n() != l.n())
        throw InvalidInputError("hsic: Gram matrices of different sizes");
    const int n = k.n();
    if (n < 4)
        throw InsufficientSampleError("unbiased HSIC requires n >= 4");
    const Eigen::MatrixXd kt = zero_diagonal(k.k);
    const Eigen::MatrixXd lt = zero_diagonal(l.k);
    const double value = hsic_unbiased_terms(kt, lt, kt.rowwise().sum(), lt.rowwise().sum(),
                                             identity_perm(n));
    return StatValue{value, StatKind::HsicUnbiased, n};
}

StatValue feuerverger_t1(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw InvalidInputError("feuerverger: samples of different lengths");
    const int n = static_cast<int>(x.size());
    const Eigen::Map<const Eigen::MatrixXd> mx(x.data(), n, 1);
    const Eigen::Map<const Eigen::MatrixXd> my(y.data(), n, 1);
    return PreparedStat::prepare(PairedSample(mx, my), StatKind::FeuervergerT1).observed();
}

}  // namespace depstat
