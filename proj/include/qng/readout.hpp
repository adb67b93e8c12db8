// readout.hpp -- second-pulse optical verification of a prepared mechanical
// state.
//
// A red-detuned (beam-splitter) pulse maps the phonon statistics onto the
// detected output mode, so photon counting on that mode certifies the
// mechanical state directly -- no retrodiction from earlier records is
// needed.  Imperfect detection enters as a Fock-basis beam-splitter loss map
// applied to the photon statistics.  The transfer is most complete near the
// swap time pi / (2 |G-|) of the strong-coupling beam-splitter dynamics.
#pragma once

#include <Eigen/Dense>

#include "qng/covariance.hpp"
#include "qng/herald.hpp"
#include "qng/params.hpp"

namespace qng::readout {

/// Photon-number statistics of the detected readout mode.
struct PhotonStats {
    Eigen::VectorXd p;        ///< probabilities p(0) .. p(nmax)
    double eta_applied = 1.0; ///< detection efficiency already folded in

    /// Probability mass beyond the stored truncation.
    double tail() const { return 1.0 - p.sum(); }
};

/// Photon statistics of the detected optical mode of an arbitrary joint
/// (mechanics, output) covariance -- the engine-agnostic core used by both
/// readout routes and by the CLI.
PhotonStats stats_from_joint(const FieldCM& joint, int nmax);

/// Photon statistics after a readout pulse of length tau2 on one Gaussian
/// mechanical state (ladder covariance over (b^dag, b)).
PhotonStats readout_probabilities(const Mat2c& mech, const CavityParams& p, double tau2,
                                  int nmax);

/// Same for a signed Gaussian mixture (a heralded state): per-component
/// statistics combined with the signed weights.
PhotonStats readout_probabilities(const herald::HeraldedState& mech, const CavityParams& p,
                                  double tau2, int nmax);

/**
 * @brief Beam-splitter loss map of transmissivity eta on photon statistics,
 *        p'_i = sum_l C(i+l, i) eta^i (1 - eta)^l p_{i+l}.
 *
 * Exactly trace preserving and composable: loss(eta1) after loss(eta2)
 * equals loss(eta1 eta2).
 */
PhotonStats loss_map(const PhotonStats& stats, double eta);

/// Density-matrix version of the same map,
///   rho'_{ij} = sum_l sqrt(C(i+l,l) C(j+l,l)) eta^{(i+j)/2} (1-eta)^l rho_{i+l,j+l};
/// only the diagonal feeds the pass/fail verdicts, but coherences are kept.
Eigen::MatrixXcd loss_map(const Eigen::MatrixXcd& rho, double eta);

/// Duration of a full mechanics -> light state swap, pi / (2 |G-|), defined
/// by the oscillation rate of the beam-splitter interaction.  Throws at the
/// critical point g = (kappa - gamma)/2 where the oscillation rate vanishes.
double swap_time(const CavityParams& p);

/// Convenience chain: readout pulse followed by detector loss.
PhotonStats detected_probabilities(const herald::HeraldedState& mech, const CavityParams& p,
                                   double tau2, double eta, int nmax);

} // namespace qng::readout
