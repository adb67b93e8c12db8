// bargmann.cpp -- coherent-state kernel of Gaussian states and the exact
// Fock-basis expansion derived from it.

#include "qng/bargmann.hpp"

#include <cmath>

#include "qng/errors.hpp"
#include "qng/math/exp_taylor.hpp"

namespace qng {

namespace {

/// X (2V - I)(2V + I)^{-1} and the vacuum element, any mode number.
void kernel_parts(const MatXc& v, MatXc& rt, double& p0) {
    const int dim = static_cast<int>(v.rows());
    const int modes = dim / 2;
    const MatXc denom = 2.0 * v + MatXc::Identity(dim, dim);
    const cplx det = denom.determinant();
    if (det.real() <= 0.0 || std::abs(det.imag()) > 1e-8 * std::abs(det))
        throw NumericalError("bargmann_kernel: det(2V + I) must be real positive");
    MatXc x = MatXc::Zero(dim, dim);
    for (int i = 0; i < modes; ++i) {
        x(i, modes + i) = 1.0;
        x(modes + i, i) = 1.0;
    }
    rt = x * (2.0 * v - MatXc::Identity(dim, dim)) * denom.inverse();
    // Enforce the exact symmetry of the kernel matrix.
    rt = 0.5 * (rt + rt.transpose()).eval();
    p0 = std::pow(2.0, modes) / std::sqrt(det.real());
}

} // namespace

BargmannKernel bargmann_kernel(const FieldCM& two_mode) {
    if (two_mode.modes() != 2)
        throw NumericalError("bargmann_kernel: expects a two-mode state");
    BargmannKernel k;
    MatXc rt;
    kernel_parts(two_mode.mat(), rt, k.p0);
    k.rt = rt;
    // Permute (b1*, b2*, a1, a2) -> (b1*, a1, b2*, a2) to expose per-mode blocks.
    const int perm[4] = {0, 2, 1, 3};
    Mat4c r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = rt(perm[i], perm[j]);
    k.mm = r.block<2, 2>(0, 0);
    k.mc = r.block<2, 2>(0, 2);
    k.cm = r.block<2, 2>(2, 0);
    k.cc = r.block<2, 2>(2, 2);
    return k;
}

BargmannKernelSingle bargmann_kernel_single(const Mat2c& v1) {
    BargmannKernelSingle k;
    MatXc rt;
    kernel_parts(v1, rt, k.p0);
    k.r = rt;
    return k;
}

Eigen::MatrixXcd gaussian_fock_matrix(const Mat2c& v1, int nmax) {
    const BargmannKernelSingle k = bargmann_kernel_single(v1);
    // <n|rho|m> = P0 sqrt(n! m!) c_{nm} where c are the Taylor coefficients
    // of exp(1/2 s^T R s); the scaled recurrence returns sqrt(n! m!) c_{nm}.
    const Eigen::MatrixXcd chat =
        math::exp_taylor_2(k.r, Eigen::Vector2cd::Zero(), nmax, nmax);
    return k.p0 * chat;
}

Eigen::VectorXd gaussian_fock_populations(const Mat2c& v1, int nmax) {
    const Eigen::MatrixXcd rho = gaussian_fock_matrix(v1, nmax);
    Eigen::VectorXd p(nmax + 1);
    for (int n = 0; n <= nmax; ++n) p(n) = rho(n, n).real();
    return p;
}

} // namespace qng
