// covariance.hpp -- Gaussian-state covariance matrices in two equivalent
// representations and the maps between them.
//
// Ladder ("field") form: for N modes collect u = (a_1^dag .. a_N^dag,
// a_1 .. a_N) and store V = <u u^dag>_sym, i.e.
//     V_jk = 1/2 < u_j u_k^dag + u_k^dag u_j >,
// so the vacuum is I/2 and a thermal state is diag(n+1/2, ...).
//
// Quadrature form: u_q = (p_1 .. p_N, x_1 .. x_N) with x = (a^dag + a)/sqrt2
// and p = i(a^dag - a)/sqrt2.  The two are related by the unitary
//     Omega = 1/sqrt2 [[ i I, -i I ], [ I, I ]],   V_q = Omega V Omega^dag,
// and V_q is real symmetric for any physical state.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qng/params.hpp"

namespace qng {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using MatXc = Eigen::MatrixXcd;
using MatX = Eigen::MatrixXd;

class QuadCM;

/// Unitary mapping ladder-ordered operators to quadratures (see file header).
MatXc ladder_to_quad(int modes);

/// Symplectic form over (p_1..p_N, x_1..x_N): [u_i, u_j] = i sigma_ij,
/// i.e. sigma = [[0, -I], [I, 0]].
MatX quad_symplectic_form(int modes);

/**
 * @brief Ladder-ordered covariance matrix of an N-mode Gaussian state
 *        (zero mean throughout; the dynamics never displaces the state).
 */
class FieldCM {
public:
    /// Wraps a 2N x 2N matrix; enforces hermiticity and the mode-exchange
    /// symmetry conj(V) = X V X up to a small numerical residue (gross
    /// violations throw).
    explicit FieldCM(MatXc v);

    static FieldCM vacuum(int modes);
    /// Single-mode thermal state with mean occupation nbar.
    static FieldCM thermal(double nbar);
    /// Single-mode squeezed thermal state, the standard initial mechanical
    /// state: occupation n0, squeezing r, phase phi0.  Its ladder moments are
    ///   <b^dag b> = n0 cosh(2r) + sinh^2 r,
    ///   <b b>     = -(n0 + 1/2) e^{i phi0} sinh(2r).
    static FieldCM squeezed_thermal(const MechInit& init);
    /// Tensor product (block-diagonal join) of two registers.
    static FieldCM tensor(const FieldCM& a, const FieldCM& b);

    int modes() const { return modes_; }
    const MatXc& mat() const { return v_; }

    /// Marginal state of the listed modes (partial trace over the rest).
    FieldCM marginal(const std::vector<int>& keep) const;

    /// Mean occupation <a_i^dag a_i> of one mode.
    double mean_occupation(int mode) const;

    /// Pair moment <a_i a_i> of one mode.
    cplx pair_moment(int mode) const;

    /// Quadrature representation.
    QuadCM quadratures() const;

private:
    MatXc v_;
    int modes_;
};

/**
 * @brief Quadrature-ordered (real symmetric) covariance matrix.
 */
class QuadCM {
public:
    explicit QuadCM(MatX v);

    static QuadCM from_field(const FieldCM& f);
    FieldCM field() const;

    int modes() const { return modes_; }
    const MatX& mat() const { return v_; }

    /// Heisenberg-uncertainty physicality test: all eigenvalues of
    /// V + (i/2) sigma must be >= -tol.
    bool is_physical(double tol = 1e-9) const;

    /// Tr rho^2 = 1 / sqrt(det(2V)).
    double purity() const;

private:
    MatX v_;
    int modes_;
};

/// Overlap of two Gaussian states, Tr[rho_1 rho_2] = 1/sqrt(det(V_1 + V_2)).
double gaussian_overlap(const QuadCM& a, const QuadCM& b);

/**
 * @brief Covariance of S(z) rho S(z)^dag where S(z) = exp[(z^* a^2 -
 *        z a^dag^2)/2] squeezes a single mode of the register, z = r e^{i phi}.
 *
 * Passing -r undoes the squeeze, which is how squeezed-Fock-basis phonon
 * statistics are evaluated.
 */
FieldCM apply_squeeze(const FieldCM& v, int mode, double r, double phi);

} // namespace qng
