// herald.hpp -- conditioning the mechanical state on the photodetection
// record of the pulse output mode.
//
// A click of a bucket detector with efficiency eta implements the POVM
// element 1 - (1-eta)^{n}, its complement the Gaussian operator
// (1-eta)^{n} = (1/eta) rho_th(ntilde), ntilde = (1-eta)/eta.  Conditioning
// a two-mode Gaussian state on "no click" therefore stays Gaussian, and the
// click-conditioned mechanical state is an exact *signed* mixture of two
// Gaussian states,
//     rho_click = [ rho_marginal - p_nc rho_noclick ] / p_click,
// which is the representation used throughout (it closes under further
// pulses).  An equivalent Fock-series representation resolves the detected
// photon number n2 and carries polynomial corrections to the Gaussian
// Wigner function; both must agree and are cross-checked in the tests.
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qng/bargmann.hpp"
#include "qng/covariance.hpp"
#include "qng/params.hpp"

namespace qng::herald {

/// Squeezed-Fock reference frame: phonon statistics are evaluated in the
/// basis S(z)|n> with z = r e^{i phi} (r = 0 is the plain Fock basis).
struct SqueezeFrame {
    double r = 0.0;
    double phi = 0.0;
};

/// One signed Gaussian component of a conditional mechanical state.
struct GaussComponent {
    double weight = 0.0; ///< signed; all weights of a state sum to 1
    Mat2c v;             ///< ladder covariance over (b^dag, b)
};

/**
 * @brief Conditional mechanical state as a signed mixture of Gaussian
 *        states, together with the probability of the heralding record.
 */
struct HeraldedState {
    std::vector<GaussComponent> components;
    double probability = 1.0; ///< probability of the conditioning record

    /// Sum of component weights (1 up to pruning error).
    double weight_sum() const;

    /// Mean phonon number of the mixture.
    double mean_occupation() const;

    /// Wigner function at alpha (normalized to int W d^2alpha = 1).
    double wigner(cplx alpha) const;

    /// Exact phonon-number probabilities p_0..p_nmax, optionally in a
    /// squeezed-Fock basis.
    Eigen::VectorXd phonon_populations(int nmax,
                                       const std::optional<SqueezeFrame>& frame = {}) const;
};

/// Gaussian no-click conditioning of a joint (mechanics, output) state.
struct NoClickResult {
    Mat2c v;                  ///< conditional mechanical ladder covariance
    double probability = 0.0; ///< no-click probability
};
NoClickResult condition_noclick(const FieldCM& joint, double eta);

/// Click conditioning: exact two-component signed Gaussian mixture.
HeraldedState condition_click(const FieldCM& joint, double eta);

/**
 * @brief One term of the Fock-series representation: the mechanical state
 *        conditioned on n2 detected photons, entering with the bucket-
 *        detector weight p(n2) [1 - (1-eta)^{n2}] / p_click.
 *
 * The (unnormalized, weight-carrying) Wigner function of a term is
 *   W(alpha) = pref * e^{-v^dag L v} * C_{n2 n2}(a, zmap v),
 * with v = (alpha^*, alpha)^T and C the factorially scaled Taylor
 * coefficient of exp(1/2 s^T a s + z^T s).
 */
struct SeriesTerm {
    double weight = 0.0; ///< signed detection weight (already / p_click)
    int n2 = 0;          ///< resolved photon number
    Mat2c l;             ///< Gaussian exponent matrix
    Mat2c a;             ///< quadratic part of the correction generator
    Mat2c zmap;          ///< linear part: z = zmap * v
    double pref = 0.0;   ///< overall prefactor of the *normalized* term
};

/**
 * @brief Click-conditioned mechanical state resolved over the detected
 *        photon number.
 */
struct FockSeriesState {
    std::vector<SeriesTerm> terms;
    double probability = 0.0; ///< click probability

    /// Wigner function of the conditional state at alpha.
    double wigner(cplx alpha) const;

    /// Phonon-number probabilities via adaptive phase-space overlap with
    /// the (optionally squeezed) Fock-state Wigner functions.
    Eigen::VectorXd phonon_populations(int nmax,
                                       const std::optional<SqueezeFrame>& frame = {}) const;
};

/**
 * @param tail_tol  terminate the photon-number series when the remaining
 *                  tail mass is below this bound
 */
FockSeriesState condition_click_series(const FieldCM& joint, double eta, double tail_tol = 1e-12);

/// Photon-number distribution p(0..nmax) of the detected output mode
/// (before detector loss), from the series machinery.
Eigen::VectorXd output_photon_distribution(const FieldCM& joint, int nmax);

/**
 * @brief Repeated pulse-and-click protocol: each of the `pulses` rounds
 *        propagates the mechanical mixture through one pulse and conditions
 *        on a click, multiplying the component count by two.
 *
 * @param mech0  initial mechanical ladder covariance
 * @param prune  drop components with |weight| below this threshold
 * @return heralded mixture after all rounds; probability is the joint
 *         probability of the full click record
 */
HeraldedState multipulse_heralded(const Mat2c& mech0, const CavityParams& p, double tau,
                                  double eta, int pulses, double prune = 1e-10);

/// Exact phonon populations of a single Gaussian component, optionally in a
/// squeezed-Fock basis (shared by the mixture and the tests).
Eigen::VectorXd gaussian_phonon_populations(const Mat2c& v, int nmax,
                                            const std::optional<SqueezeFrame>& frame = {});

} // namespace qng::herald
