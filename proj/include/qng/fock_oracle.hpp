// fock_oracle.hpp -- truncated two-mode Fock-basis density matrix of a
// Gaussian state, with photon-counting conditioning done by direct matrix
// algebra.
//
// This is the brute-force reference route: every element
// rho_{(n1 n2),(m1 m2)} is generated exactly from the coherent-state kernel,
// the detector POVM is applied as an explicit diagonal weight, and the
// mechanical state follows by partial trace.  No Gaussian shortcut of the
// herald module is reused, so agreement between the two routes validates
// both.  Cost grows as (nmech+1)^2 (nopt+1)^2; intended for moderate
// truncations.
#pragma once

#include <Eigen/Dense>

#include "qng/bargmann.hpp"
#include "qng/covariance.hpp"
#include "qng/math/exp_taylor.hpp"

namespace qng {

class TwoModeFock {
public:
    /// Expand the joint (mechanics, output) state up to nmech/nopt quanta.
    TwoModeFock(const FieldCM& joint, int nmech, int nopt);

    /// rho_{(n1 n2),(m1 m2)}.
    cplx element(int n1, int n2, int m1, int m2) const;

    /// Trace of the truncated matrix; its deficit from 1 measures the
    /// truncation error.
    double trace() const;

    /// Throws TruncationError unless 1 - trace() <= tol.
    void require_trace(double tol) const;

    /// Marginal photon-number probability of the detected mode.
    double probability_optical(int n2) const;

    /// Normalized mechanical density matrix conditioned on exactly n2
    /// detected photons.
    Eigen::MatrixXcd conditional_mech(int n2) const;

    /// Probability that a bucket detector of efficiency eta clicks.
    double click_probability(double eta) const;

    /// Normalized mechanical density matrix conditioned on a click.
    Eigen::MatrixXcd click_conditioned(double eta) const;

    /// Diagonal of click_conditioned: phonon-number probabilities
    /// p_0..p_nmax after a click.
    Eigen::VectorXd phonon_populations_click(double eta, int nmax) const;

    int nmech() const { return nm_; }
    int nopt() const { return no_; }

private:
    int nm_, no_;
    double p0_;
    math::ExpTaylor4 tab_;
};

} // namespace qng
