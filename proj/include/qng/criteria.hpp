// criteria.hpp -- certification of prepared mechanical states.
//
// Genuine n-phonon quantum non-Gaussianity: a state whose Fock probability
// Q_n = <n|rho|n> exceeds the largest value attainable by any displaced,
// squeezed superposition of |0..n-1> cannot be written as a mixture of such
// states.  The module computes these thresholds, applies the witness,
// evaluates two algebraic nonclassicality inequalities on (Q0, Q1, Q2),
// evolves states under thermal contact in the Fock basis, and measures the
// "depth" of a criterion -- how many thermal quanta the oscillator may
// absorb before the criterion fails.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qng::criteria {

using cplx = std::complex<double>;

/**
 * @brief Largest probability of the Fock state |n> within the pure-Gaussian
 *        family D(alpha) S(xi) sum_{k<n} c_k |k>, for the given alpha, xi
 *        (the superposition c is maximized analytically).
 *
 * A global phase rotation makes alpha real without loss of generality, so
 * the threshold search runs over (alpha, Re xi, Im xi) only.
 */
double qng_family_probability(int n, cplx alpha, cplx xi);

/// Threshold Q_n^G: the global maximum of qng_family_probability over the
/// Gaussian parameters, found by multi-start simplex search (cached per n).
double qng_threshold(int n);

/// Verdict of the genuine n-phonon non-Gaussianity test on a phonon-number
/// distribution.
struct QngVerdict {
    int n = 1;
    double q = 0.0;         ///< measured Q_n = p(n)
    double threshold = 0.0; ///< Q_n^G
    double margin = 0.0;    ///< q - threshold
    bool pass = false;      ///< q > threshold
};
QngVerdict qng_witness(const Eigen::VectorXd& dist, int n);

/**
 * @brief Algebraic nonclassicality tests on the first three Fock
 *        probabilities: every classical (positive-P) state satisfies
 *        Q1^2 <= 2 Q0 Q2  and  Q0 + Q1^2/(2 Q2) [e^{2 Q2/Q1} - 1] <= 1;
 *        violating either certifies nonclassicality.
 *
 * The Q2 -> 0 limit of the second bound is Q0 + Q1; a vanishing Q1 yields
 * no certificate from it.
 */
struct NonclassicalVerdict {
    bool ineq1 = false;
    bool ineq2 = false;
    bool any() const { return ineq1 || ineq2; }
};
NonclassicalVerdict nonclassicality(double q0, double q1, double q2);

/// Aggregated certification of one phonon-number distribution (which may
/// live in a squeezed-Fock basis; the frame fields are descriptive only).
struct WitnessReport {
    std::vector<QngVerdict> qng; ///< orders n = 1 .. requested maximum
    NonclassicalVerdict nonclassical;
    double frame_r = 0.0;
    double frame_phi = 0.0;
};
WitnessReport witness_report(const Eigen::VectorXd& dist, int max_order, double frame_r = 0.0,
                             double frame_phi = 0.0);

/**
 * @brief Thermal-contact master equation in the Fock basis,
 *          drho/dt = gamma/2 { (nbar+1) L[b] + nbar L[b^dag] } rho,
 *        L[o] rho = 2 o rho o^dag - o^dag o rho - rho o^dag o.
 *
 * The generator preserves the diagonal distance n - m, so each coherence
 * sector evolves independently under a tridiagonal birth-death generator.
 * Each sector is diagonally similar to a symmetric tridiagonal matrix
 * (detailed balance), giving an exact eigendecomposition solution; tiny
 * nbar, where the similarity scaling would overflow, falls back to
 * adaptive Runge-Kutta integration of the same generator.
 */
class ThermalLindblad {
public:
    /// Generator truncated at Fock level nmax (inclusive).
    ThermalLindblad(int nmax, double gamma, double nbar);

    int nmax() const { return nmax_; }

    /// Evolved diagonal (populations); p0 may be shorter than nmax + 1.
    Eigen::VectorXd populations(const Eigen::VectorXd& p0, double t) const;

    /// Evolved density matrix; rho0 may be smaller than the truncation.
    Eigen::MatrixXcd density(const Eigen::MatrixXcd& rho0, double t) const;

private:
    int nmax_;
    double gamma_;
    double nbar_;
};

/// Populations after thermal contact for time t, with automatic enlargement
/// of the Fock truncation until the top-level population is negligible.
/// The result may be longer than the input.
Eigen::VectorXd lindblad_populations(const Eigen::VectorXd& p0, double gamma, double nbar,
                                     double t);

/// Density-matrix version of the same evolution.
Eigen::MatrixXcd lindblad_evolve(const Eigen::MatrixXcd& rho0, double gamma, double nbar,
                                 double t);

/// Criterion tracked by the depth search.
struct DepthWitness {
    enum class Kind { Qng, Nonclassical };
    Kind kind = Kind::Qng;
    int n = 1; ///< order of the QNG criterion (ignored for Nonclassical)

    static DepthWitness qng(int n) { return {Kind::Qng, n}; }
    static DepthWitness nonclassical() { return {Kind::Nonclassical, 0}; }
};

/// Result of the depth search: d = gamma nbar t* thermal quanta absorbed
/// when the tracked criterion stops passing.
struct DepthResult {
    double d = 0.0;
    bool passed_at_zero = false; ///< criterion held for the input state
    bool unbounded = false;      ///< criterion never failed within the budget
    double t_lo = 0.0;           ///< criterion still passes here
    double t_hi = 0.0;           ///< criterion already fails here
};

/**
 * @brief Bisection on the thermal-contact time until the criterion flips;
 *        the bracket is tightened to relative width 1e-3.
 *
 * The input must be a normalized phonon-number distribution; gamma and
 * nbar must be positive (their product converts time to absorbed quanta).
 */
DepthResult depth(const Eigen::VectorXd& populations, const DepthWitness& witness, double gamma,
                  double nbar);

} // namespace qng::criteria
