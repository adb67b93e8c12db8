// sensing.cpp -- phase-randomized displacement channel, Fisher information
// of a Fock-resolving detector, and the Cramer-Rao error bound.
#include "qng/sensing.hpp"

#include <cmath>
#include <limits>

#include "qng/errors.hpp"
#include "qng/math/special.hpp"

namespace qng::sensing {

namespace {

/// Head-bin probabilities below this are treated as underflowed and folded
/// into the lump outcome.
constexpr double kUnderflow = 1e-250;

void check_distribution(const Eigen::VectorXd& q) {
    if (q.size() < 1) throw ConfigError("sensing: empty probe distribution");
    if (q.minCoeff() < -1e-10)
        throw ConfigError("sensing: probe distribution has negative entries");
    if (std::abs(q.sum() - 1.0) > 1e-6)
        throw ConfigError("sensing: probe distribution is not normalized");
}

int output_bins(Eigen::Index support, double nc) {
    return static_cast<int>(support) + static_cast<int>(std::ceil(10.0 + 5.0 * nc));
}

/// Symmetric channel kernel K(n|m) = K(m|n); only the positive-index
/// Laguerre polynomial of the smaller level ever appears.
double kernel(int n, int m, double nc) {
    const int lo = std::min(n, m);
    const int d = std::abs(n - m);
    const double lag = math::laguerre(lo, double(d), nc);
    const double log_pref =
        math::log_factorial(lo) - math::log_factorial(lo + d) - nc + d * std::log(nc);
    return std::exp(log_pref) * lag * lag;
}

/// dK/dnc from the product rule: the prefactor contributes (d/nc - 1) and
/// the squared polynomial contributes 2 L'/L with L' = -L_{lo-1}^{(d+1)}.
double kernel_derivative(int n, int m, double nc) {
    const int lo = std::min(n, m);
    const int d = std::abs(n - m);
    const double lag = math::laguerre(lo, double(d), nc);
    const double dlag = math::laguerre_derivative(lo, double(d), nc);
    const double log_pref =
        math::log_factorial(lo) - math::log_factorial(lo + d) - nc + d * std::log(nc);
    return std::exp(log_pref) * ((d / nc - 1.0) * lag * lag + 2.0 * lag * dlag);
}

Eigen::VectorXd apply_kernel(const Eigen::VectorXd& q, double nc,
                             double (*element)(int, int, double)) {
    const int bins = output_bins(q.size(), nc);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(bins);
    for (int n = 0; n < bins; ++n) {
        double acc = 0.0;
        for (int m = 0; m < q.size(); ++m) {
            if (q(m) == 0.0) continue;
            acc += q(m) * element(n, m, nc);
        }
        out(n) = acc;
    }
    return out;
}

} // namespace

Eigen::VectorXd prd_channel(const Eigen::VectorXd& q, double nc) {
    check_distribution(q);
    if (nc < 0.0) throw ConfigError("prd_channel: displacement energy must be >= 0");
    if (nc == 0.0) return q; // identity channel
    Eigen::VectorXd p = apply_kernel(q, nc, kernel);
    if (std::abs(p.sum() - q.sum()) > 1e-8)
        throw TruncationError("prd_channel: output truncation leaves a tail above 1e-8");
    return p;
}

Eigen::VectorXd prd_channel_derivative(const Eigen::VectorXd& q, double nc) {
    check_distribution(q);
    if (nc <= 0.0)
        throw ConfigError("prd_channel_derivative: displacement energy must be positive");
    return apply_kernel(q, nc, kernel_derivative);
}

namespace {

/// F = sum_head (p'_n)^2 / p_n + (p'_lump)^2 / p_lump with the lump formed
/// by everything above kmax.  Normalization makes the lump exact:
/// p_lump = 1 - sum_head p_n and p'_lump = -sum_head p'_n.
double assemble_fisher(const Eigen::VectorXd& p, const Eigen::VectorXd& dp, int kmax,
                       int* merged) {
    if (kmax < 0) throw ConfigError("fisher: kmax must be >= 0");
    if (kmax + 1 > p.size())
        throw ConfigError("fisher: kmax exceeds the available output bins");
    if (merged) *merged = 0;

    double f = 0.0;
    double head_p = 0.0, head_dp = 0.0;
    for (int n = 0; n <= kmax; ++n) {
        if (p(n) < kUnderflow) {
            if (merged) ++(*merged);
            continue; // the bin's (negligible) mass stays in the lump
        }
        f += dp(n) * dp(n) / p(n);
        head_p += p(n);
        head_dp += dp(n);
    }
    const double lump = 1.0 - head_p;
    if (lump > 1e-14) f += head_dp * head_dp / lump;
    return f;
}

} // namespace

double fisher(const std::function<Eigen::VectorXd(double)>& dist_fn, double nc, int kmax,
              int* merged) {
    if (nc <= 0.0) throw ConfigError("fisher: displacement energy must be positive");
    double h = std::max(1e-6, 1e-3 * nc);
    h = std::min(h, 0.5 * nc); // keep the lower evaluation point positive
    const Eigen::VectorXd p = dist_fn(nc);
    const Eigen::VectorXd pp = dist_fn(nc + h);
    const Eigen::VectorXd pm = dist_fn(nc - h);
    const int head = std::min({p.size(), pp.size(), pm.size(), Eigen::Index(kmax) + 1});
    if (head < kmax + 1) throw ConfigError("fisher: kmax exceeds the available output bins");
    const Eigen::VectorXd dp = (pp.head(head) - pm.head(head)) / (2.0 * h);
    return assemble_fisher(p.head(head), dp, kmax, merged);
}

double fisher_prd(const Eigen::VectorXd& q, double nc, int kmax, int* merged) {
    if (nc <= 0.0) throw ConfigError("fisher_prd: displacement energy must be positive");
    const Eigen::VectorXd p = prd_channel(q, nc);
    const Eigen::VectorXd dp = prd_channel_derivative(q, nc);
    return assemble_fisher(p, dp, kmax, merged);
}

CrbResult crb(double fisher_info, int copies) {
    if (fisher_info < 0.0) throw ConfigError("crb: Fisher information must be >= 0");
    if (copies < 1) throw ConfigError("crb: at least one copy is required");
    CrbResult r;
    if (fisher_info == 0.0) {
        r.infinite = true;
        r.delta_nc = std::numeric_limits<double>::infinity();
        return r;
    }
    r.delta_nc = 1.0 / std::sqrt(double(copies) * fisher_info);
    return r;
}

SensingResult sense_grid(const Eigen::VectorXd& q, const Eigen::VectorXd& nc_grid, int kmax,
                         int copies) {
    SensingResult res;
    res.nc_grid = nc_grid;
    res.kmax = kmax;
    res.copies = copies;
    res.fisher_info.resize(nc_grid.size());
    res.error.resize(nc_grid.size());
    for (int i = 0; i < nc_grid.size(); ++i) {
        res.fisher_info(i) = fisher_prd(q, nc_grid(i), kmax);
        res.error(i) = crb(res.fisher_info(i), copies).delta_nc;
    }
    return res;
}

} // namespace qng::sensing
