// readout.cpp -- beam-splitter state transfer to light plus detector-loss
// accounting.  The per-Gaussian photon statistics reuse the coherent-kernel
// generating function; loss-map coefficients are evaluated in log space so
// that deep Fock tails neither overflow nor lose positivity.

#include "qng/readout.hpp"

#include <cmath>

#include "qng/cavity.hpp"
#include "qng/errors.hpp"
#include "qng/math/special.hpp"

namespace qng::readout {
namespace {

void check_red(const CavityParams& p) {
    p.validate();
    if (p.sideband != Sideband::Red)
        throw ConfigError("readout: verification needs a red-detuned (beam-splitter) pulse");
}

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ConfigError("loss map: efficiency must lie in [0, 1]");
}

/// Binomial loss coefficient C(i+l, i) eta^i (1-eta)^l, in log space.
double loss_coeff(int i, int l, double eta) {
    if (eta == 1.0) return l == 0 ? 1.0 : 0.0;
    if (eta == 0.0) return i == 0 ? 1.0 : 0.0;
    return std::exp(math::log_factorial(i + l) - math::log_factorial(i) -
                    math::log_factorial(l) + i * std::log(eta) + l * std::log1p(-eta));
}

} // namespace

PhotonStats stats_from_joint(const FieldCM& joint, int nmax) {
    if (nmax < 0) throw ConfigError("readout: photon cutoff must be nonnegative");
    return {herald::output_photon_distribution(joint, nmax), 1.0};
}

PhotonStats readout_probabilities(const Mat2c& mech, const CavityParams& p, double tau2,
                                  int nmax) {
    check_red(p);
    if (tau2 <= 0.0) throw ConfigError("readout: pulse length must be positive");
    return stats_from_joint(cavity::propagate_pulse(mech, p, tau2), nmax);
}

PhotonStats readout_probabilities(const herald::HeraldedState& mech, const CavityParams& p,
                                  double tau2, int nmax) {
    check_red(p);
    if (tau2 <= 0.0) throw ConfigError("readout: pulse length must be positive");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(nmax + 1);
    for (const auto& comp : mech.components) {
        const FieldCM joint = cavity::propagate_pulse(comp.v, p, tau2);
        acc += comp.weight * herald::output_photon_distribution(joint, nmax);
    }
    // signed components must recombine to a genuine distribution
    if (acc.minCoeff() < -1e-8)
        throw NumericalError("readout: signed mixture produced a negative photon probability");
    acc = acc.cwiseMax(0.0);
    return {acc, 1.0};
}

PhotonStats loss_map(const PhotonStats& stats, double eta) {
    check_eta(eta);
    const int n = static_cast<int>(stats.p.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; i + l < n; ++l) out(i) += loss_coeff(i, l, eta) * stats.p(i + l);
    return {out, stats.eta_applied * eta};
}

Eigen::MatrixXcd loss_map(const Eigen::MatrixXcd& rho, double eta) {
    check_eta(eta);
    const int n = static_cast<int>(rho.rows());
    if (rho.cols() != n) throw ConfigError("loss map: density matrix must be square");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int l = 0; i + l < n && j + l < n; ++l) {
                // sqrt(C(i+l,l) C(j+l,l)) eta^{(i+j)/2} (1-eta)^l, log space
                double c;
                if (eta == 1.0) {
                    c = l == 0 ? 1.0 : 0.0;
                } else if (eta == 0.0) {
                    c = (i == 0 && j == 0) ? 1.0 : 0.0;
                } else {
                    c = std::exp(0.5 * (math::log_factorial(i + l) - math::log_factorial(i) +
                                        math::log_factorial(j + l) - math::log_factorial(j)) -
                                 math::log_factorial(l) + 0.5 * (i + j) * std::log(eta) +
                                 l * std::log1p(-eta));
                }
                out(i, j) += c * rho(i + l, j + l);
            }
        }
    }
    return out;
}

double swap_time(const CavityParams& p) {
    check_red(p);
    const double g2 = cavity::interaction_rate_sq(p); // -g^2 + (kappa-gamma)^2/4
    const double scale = p.g * p.g + 0.25 * (p.kappa - p.gamma) * (p.kappa - p.gamma);
    if (std::abs(g2) < 1e-12 * scale)
        throw NumericalError("swap time: oscillation rate vanishes at g = (kappa - gamma)/2");
    return M_PI / (2.0 * std::sqrt(std::abs(g2)));
}

PhotonStats detected_probabilities(const herald::HeraldedState& mech, const CavityParams& p,
                                   double tau2, double eta, int nmax) {
    return loss_map(readout_probabilities(mech, p, tau2, nmax), eta);
}

} // namespace qng::readout
