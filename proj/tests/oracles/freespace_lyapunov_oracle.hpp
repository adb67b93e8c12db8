// freespace_lyapunov_oracle.hpp -- independent reference for the cavity-less
// measurement pulse: brute Runge-Kutta integration of the second-moment
// (Lyapunov) equations of the extended state (p, x, Y_acc, X_acc), where the
// accumulators build up the rectangular output-mode quadratures over the
// pulse,
//   dY_acc/dt = Y_in/sqrt(tau) + sqrt(4 Gamma / tau) x,
//   dX_acc/dt = X_in/sqrt(tau),
// and the white input noise produces the diffusion entries
//   D_pp   = 2 gamma (nbar + 1/2) + 2 Gamma,
//   D_pX   = sqrt(4 Gamma) * (1/sqrt(tau)) * 1/2      (shared X_in drive),
//   D_YY   = D_XX = 1/(2 tau).
// No formal input-output solution enters; this route shares nothing with the
// production assembly except the parameter record.
#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "qng/covariance.hpp"
#include "qng/math/runge_kutta.hpp"
#include "qng/params.hpp"

namespace qng_test {

/// Covariance over (p, Y_out, x, X_out) after a pulse of length tau.
inline Eigen::Matrix4d freespace_lyapunov(const qng::FreeSpaceParams& fp, double tau,
                                          const qng::MechInit& init) {
    using M4 = Eigen::Matrix4d;
    const double spp = 2.0 * fp.gamma * (fp.nbar + 0.5) + 2.0 * fp.meas_rate;

    M4 a = M4::Zero();
    a(0, 0) = -fp.gamma;
    a(0, 1) = -fp.omega_m;
    a(1, 0) = fp.omega_m;
    a(2, 1) = std::sqrt(4.0 * fp.meas_rate / tau);

    M4 d = M4::Zero();
    d(0, 0) = spp;
    d(0, 3) = d(3, 0) = std::sqrt(fp.meas_rate / tau);
    d(2, 2) = d(3, 3) = 0.5 / tau;

    M4 v = M4::Zero();
    v.topLeftCorner<2, 2>() = qng::FieldCM::squeezed_thermal(init).quadratures().mat();
    qng::math::integrate_adaptive(
        v, [&](double, const M4& y) { return M4(a * y + y * a.transpose() + d); }, 0.0, tau,
        1e-12, 1e-14);

    const std::array<int, 4> perm{0, 2, 1, 3}; // to (p, Y_out, x, X_out)
    M4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = v(perm[i], perm[j]);
    return out;
}

} // namespace qng_test
