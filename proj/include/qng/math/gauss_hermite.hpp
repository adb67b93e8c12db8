// gauss_hermite.hpp -- Gauss-Hermite nodes and weights (weight e^{-t^2}).
//
// Phonon statistics of conditioned states are overlap integrals of the form
// int poly(x, y) exp(-quadratic(x, y)) dx dy; after diagonalizing the
// quadratic these are evaluated *exactly* by a tensor Gauss-Hermite rule of
// sufficient order.
//
// Nodes come from the Golub-Welsch Jacobi matrix.  Weights are computed
// from the Christoffel function, w_i = e^{-t_i^2} / sum_k psi_k(t_i)^2 with
// psi_k the orthonormal Hermite *functions*: unlike the squared first
// eigenvector component, this stays accurate for the far-out nodes of
// high-order rules, whose classical weights underflow the eigensolver's
// absolute accuracy.  The e^{+t^2}-modified weights are provided so callers
// can keep every factor of their summand on a bounded scale.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qng::math {

struct HermiteRule {
    std::vector<double> node;
    std::vector<double> weight; ///< classical weights, sum = sqrt(pi)
    std::vector<double> wexp;   ///< weight * e^{+node^2} (all of moderate size)
};

/// n-point rule: int f(t) e^{-t^2} dt = sum_i weight_i f(t_i), exact for
/// polynomials of degree <= 2n - 1.  Equivalently
/// int g(t) dt = sum_i wexp_i [g(t_i) e^{... }] for g = f e^{-t^2}.
inline HermiteRule gauss_hermite(int n) {
    if (n < 1)
        throw std::invalid_argument("gauss_hermite: order must be positive");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(k / 2.0); // recurrence coefficient sqrt(beta_k)
        j(k - 1, k) = b;
        j(k, k - 1) = b;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j, Eigen::EigenvaluesOnly);

    HermiteRule rule;
    rule.node.resize(n);
    rule.weight.resize(n);
    rule.wexp.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = es.eigenvalues()(i);
        // orthonormal Hermite functions psi_k(t) = htilde_k(t) e^{-t^2/2}:
        // psi_{k+1} = t sqrt(2/(k+1)) psi_k - sqrt(k/(k+1)) psi_{k-1}
        double pm = 0.0;
        double pk = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
        double s = pk * pk;
        for (int k = 0; k < n - 1; ++k) {
            const double pn = t * std::sqrt(2.0 / (k + 1)) * pk -
                              std::sqrt(k / (k + 1.0)) * pm;
            pm = pk;
            pk = pn;
            s += pk * pk;
        }
        rule.node[i] = t;
        rule.wexp[i] = 1.0 / s;
        rule.weight[i] = std::exp(-t * t) / s;
    }
    return rule;
}

} // namespace qng::math
