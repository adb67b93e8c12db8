// sensing.hpp -- phase-randomized displacement sensing with a heralded
// mechanical probe.
//
// The channel displaces the probe by a fixed energy N_c quanta with a
// uniformly random phase; a Fock-resolving measurement of the result (up
// to resolution kmax, higher counts lumped together) estimates N_c.  The
// classical Fisher information of that POVM bounds the estimation error
// through the Cramer-Rao inequality.
#pragma once

#include <functional>

#include <Eigen/Dense>

namespace qng::sensing {

/**
 * @brief Phase-randomized displacement of energy nc quanta applied to the
 *        phonon-number distribution q.
 *
 * The channel kernel between Fock levels m -> n is
 *   K(n|m) = (m!/n!) e^{-Nc} Nc^{n-m} [L_m^{(n-m)}(Nc)]^2 ,
 * which is symmetric in (n, m): the negative-upper-index Laguerre for
 * n < m reduces through L_m^{(n-m)}(x) = (-x)^{m-n} (n!/m!) L_n^{(m-n)}(x)
 * to the mirrored positive-index form, so only positive-index polynomials
 * are ever evaluated.
 *
 * The output is enlarged by ceil(10 + 5 nc) bins beyond the input support;
 * a residual tail above 1e-8 raises TruncationError.
 */
Eigen::VectorXd prd_channel(const Eigen::VectorXd& q, double nc);

/// Analytic derivative of prd_channel with respect to the displacement
/// energy (same output bins).
Eigen::VectorXd prd_channel_derivative(const Eigen::VectorXd& q, double nc);

/**
 * @brief Classical Fisher information about nc carried by a Fock-resolving
 *        detector of resolution kmax: counts 0..kmax are separate outcomes
 *        and everything above is one lump outcome.
 *
 * The lump probability 1 - sum_{n<=kmax} p_n and its derivative (minus the
 * head-derivative sum) are exact regardless of the channel truncation.
 * Underflowed head bins are folded into the lump; *merged reports how many
 * (callers may warn).
 */
double fisher(const std::function<Eigen::VectorXd(double)>& dist_fn, double nc, int kmax,
              int* merged = nullptr);

/// Fisher information of the phase-randomized-displacement channel applied
/// to probe q, using the analytic channel derivative.
double fisher_prd(const Eigen::VectorXd& q, double nc, int kmax, int* merged = nullptr);

/// Cramer-Rao bound on the displacement-energy estimate from M copies.
struct CrbResult {
    double delta_nc = 0.0; ///< Delta N_c = 1 / sqrt(M F)
    bool infinite = false; ///< no information: the error is unbounded
};
CrbResult crb(double fisher_info, int copies);

/// Fisher information and Cramer-Rao error of one probe across a grid of
/// displacement energies.
struct SensingResult {
    Eigen::VectorXd nc_grid;
    Eigen::VectorXd fisher_info;
    Eigen::VectorXd error; ///< infinity where the information vanishes
    int copies = 500;
    int kmax = 2;
};
SensingResult sense_grid(const Eigen::VectorXd& q, const Eigen::VectorXd& nc_grid, int kmax = 2,
                         int copies = 500);

} // namespace qng::sensing
