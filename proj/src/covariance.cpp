// covariance.cpp -- Gaussian covariance-matrix representations.

#include "qng/covariance.hpp"

#include <cmath>

#include "qng/errors.hpp"

namespace qng {

namespace {

/// Mode-exchange matrix X = [[0, I], [I, 0]] (swaps daggered and
/// undaggered halves); physical ladder CMs satisfy conj(V) = X V X.
MatXc exchange(int modes) {
    MatXc x = MatXc::Zero(2 * modes, 2 * modes);
    for (int i = 0; i < modes; ++i) {
        x(i, modes + i) = 1.0;
        x(modes + i, i) = 1.0;
    }
    return x;
}

} // namespace

MatXc ladder_to_quad(int modes) {
    const int n = modes;
    MatXc omega = MatXc::Zero(2 * n, 2 * n);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        omega(i, i) = cplx(0.0, s);      //  i/sqrt2 a^dag
        omega(i, n + i) = cplx(0.0, -s); // -i/sqrt2 a
        omega(n + i, i) = s;
        omega(n + i, n + i) = s;
    }
    return omega;
}

MatX quad_symplectic_form(int modes) {
    const int n = modes;
    MatX sigma = MatX::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        sigma(i, n + i) = -1.0;
        sigma(n + i, i) = 1.0;
    }
    return sigma;
}

FieldCM::FieldCM(MatXc v) : v_(std::move(v)) {
    if (v_.rows() != v_.cols() || v_.rows() % 2 != 0 || v_.rows() == 0)
        throw NumericalError("FieldCM: matrix must be square of even dimension");
    modes_ = static_cast<int>(v_.rows()) / 2;
    const double scale = std::max(1.0, v_.norm());
    // Clean small integration residues; reject gross structure violations.
    const MatXc herm = 0.5 * (v_ + v_.adjoint());
    if ((v_ - herm).norm() > 1e-6 * scale)
        throw NumericalError("FieldCM: matrix is not Hermitian");
    const MatXc x = exchange(modes_);
    const MatXc sym = 0.5 * (herm + (x * herm * x).conjugate());
    if ((herm - sym).norm() > 1e-6 * scale)
        throw NumericalError("FieldCM: matrix violates mode-exchange symmetry");
    v_ = sym;
}

FieldCM FieldCM::vacuum(int modes) {
    return FieldCM(0.5 * MatXc::Identity(2 * modes, 2 * modes));
}

FieldCM FieldCM::thermal(double nbar) {
    return FieldCM((nbar + 0.5) * MatXc::Identity(2, 2));
}

FieldCM FieldCM::squeezed_thermal(const MechInit& init) {
    init.validate();
    const double diag = (init.n0 + 0.5) * std::cosh(2.0 * init.r);
    const cplx pair = -(init.n0 + 0.5) * std::exp(cplx(0.0, init.phi0)) * std::sinh(2.0 * init.r);
    Mat2c v;
    // ordering (b^dag, b): V_12 = <b^dag b^dag> = conj(<b b>)
    v << diag, std::conj(pair), pair, diag;
    return FieldCM(v);
}

FieldCM FieldCM::tensor(const FieldCM& a, const FieldCM& b) {
    const int na = a.modes(), nb = b.modes(), n = na + nb;
    MatXc v = MatXc::Zero(2 * n, 2 * n);
    // Scatter the four ladder blocks of each factor into the joint layout
    // (daggered indices first, then undaggered).
    auto scatter = [&](const FieldCM& f, int offset) {
        const int m = f.modes();
        for (int bi = 0; bi < 2; ++bi)
            for (int bj = 0; bj < 2; ++bj)
                v.block(bi * n + offset, bj * n + offset, m, m) =
                    f.mat().block(bi * m, bj * m, m, m);
    };
    scatter(a, 0);
    scatter(b, na);
    return FieldCM(v);
}

FieldCM FieldCM::marginal(const std::vector<int>& keep) const {
    const int m = static_cast<int>(keep.size());
    MatXc v(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (keep[i] < 0 || keep[i] >= modes_ || keep[j] < 0 || keep[j] >= modes_)
                throw NumericalError("FieldCM::marginal: mode index out of range");
            v(i, j) = v_(keep[i], keep[j]);
            v(i, m + j) = v_(keep[i], modes_ + keep[j]);
            v(m + i, j) = v_(modes_ + keep[i], keep[j]);
            v(m + i, m + j) = v_(modes_ + keep[i], modes_ + keep[j]);
        }
    }
    return FieldCM(v);
}

double FieldCM::mean_occupation(int mode) const {
    if (mode < 0 || mode >= modes_) throw NumericalError("FieldCM: mode index out of range");
    return v_(mode, mode).real() - 0.5;
}

cplx FieldCM::pair_moment(int mode) const {
    if (mode < 0 || mode >= modes_) throw NumericalError("FieldCM: mode index out of range");
    return v_(modes_ + mode, mode);
}

QuadCM FieldCM::quadratures() const { return QuadCM::from_field(*this); }

QuadCM::QuadCM(MatX v) : v_(std::move(v)) {
    if (v_.rows() != v_.cols() || v_.rows() % 2 != 0 || v_.rows() == 0)
        throw NumericalError("QuadCM: matrix must be square of even dimension");
    modes_ = static_cast<int>(v_.rows()) / 2;
    const double scale = std::max(1.0, v_.norm());
    const MatX sym = 0.5 * (v_ + v_.transpose());
    if ((v_ - sym).norm() > 1e-6 * scale)
        throw NumericalError("QuadCM: matrix is not symmetric");
    v_ = sym;
}

QuadCM QuadCM::from_field(const FieldCM& f) {
    const MatXc omega = ladder_to_quad(f.modes());
    const MatXc vq = omega * f.mat() * omega.adjoint();
    const double scale = std::max(1.0, vq.norm());
    if (vq.imag().norm() > 1e-7 * scale)
        throw NumericalError("QuadCM::from_field: quadrature matrix has imaginary residue");
    return QuadCM(vq.real());
}

FieldCM QuadCM::field() const {
    const MatXc omega = ladder_to_quad(modes_);
    return FieldCM(omega.adjoint() * v_.cast<cplx>() * omega);
}

bool QuadCM::is_physical(double tol) const {
    const MatX sigma = quad_symplectic_form(modes_);
    MatXc test = v_.cast<cplx>() + cplx(0.0, 0.5) * sigma.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<MatXc> es(test);
    return es.eigenvalues().minCoeff() >= -tol;
}

double QuadCM::purity() const {
    const double det = (2.0 * v_).determinant();
    if (det <= 0.0) throw NumericalError("QuadCM::purity: non-positive determinant");
    return 1.0 / std::sqrt(det);
}

double gaussian_overlap(const QuadCM& a, const QuadCM& b) {
    if (a.modes() != b.modes())
        throw NumericalError("gaussian_overlap: mode count mismatch");
    const double det = (a.mat() + b.mat()).determinant();
    if (det <= 0.0) throw NumericalError("gaussian_overlap: non-positive determinant");
    return 1.0 / std::sqrt(det);
}

FieldCM apply_squeeze(const FieldCM& v, int mode, double r, double phi) {
    const int n = v.modes();
    if (mode < 0 || mode >= n) throw NumericalError("apply_squeeze: mode index out of range");
    // Heisenberg action S^dag a S = a cosh r - e^{i phi} a^dag sinh r; the
    // state covariance transforms as V -> T V T^dag with T the matrix of
    // S^dag u S in the ladder basis.
    MatXc t = MatXc::Identity(2 * n, 2 * n);
    const double ch = std::cosh(r), sh = std::sinh(r);
    const cplx e = std::exp(cplx(0.0, phi));
    t(mode, mode) = ch;
    t(mode, n + mode) = -std::conj(e) * sh;
    t(n + mode, mode) = -e * sh;
    t(n + mode, n + mode) = ch;
    return FieldCM(t * v.mat() * t.adjoint());
}

} // namespace qng
