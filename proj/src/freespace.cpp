// freespace.cpp -- cavity-less measurement pulse: closed-form damped
// oscillator response integrated against the rectangular output mode.
//
// All first moments vanish, so the pulse is fully described by the final
// covariance over (p, Y_out, x, X_out).  Writing a = gamma/2 and
// q = a^2 - omega_m^2, the elementary kernels are
//   M(t)   = e^{-a t} [gcosh(q,t) I + gsinch(q,t) B],  B = [[-a,-w],[w,a]],
//   Is(t)  = int_0^t e^{-a u} gsinch(q,u) du
//          = [1 - e^{-a t}(gcosh + a gsinch)] / w^2,
//   Ic(t)  = int_0^t e^{-a u} gcosh(q,u) du
//          = [a - e^{-a t}(a gcosh + q gsinch)] / w^2,
//   C(t)   = int_0^t M_xp(u) du = w Is(t)   (position after a momentum kick),
// and the remaining correlation integrals -- quadratic in these kernels --
// are evaluated by adaptive Gauss-Legendre quadrature.

#include "qng/freespace.hpp"

#include <cmath>

#include "qng/cavity.hpp"
#include "qng/errors.hpp"
#include "qng/math/gauss_legendre.hpp"

namespace qng::freespace {
namespace {

using Eigen::Matrix2d;
using Eigen::Matrix4d;
using Eigen::Vector2d;

/// int_0^t e^{-a u} gsinch(q, u) du (regular through all damping regimes).
double int_exp_sinch(double a, double q, double w2, double t) {
    return (1.0 - std::exp(-a * t) * (cavity::gcosh(q, t) + a * cavity::gsinch(q, t))) / w2;
}

/// int_0^t e^{-a u} gcosh(q, u) du.
double int_exp_cosh(double a, double q, double w2, double t) {
    return (a - std::exp(-a * t) * (a * cavity::gcosh(q, t) + q * cavity::gsinch(q, t))) / w2;
}

} // namespace

Matrix2d mech_propagator(const FreeSpaceParams& p, double tau) {
    p.validate();
    const double a = 0.5 * p.gamma;
    const double q = a * a - p.omega_m * p.omega_m;
    const double e = std::exp(-a * tau);
    const double c = cavity::gcosh(q, tau);
    const double s = cavity::gsinch(q, tau);
    Matrix2d m;
    m << e * (c - a * s), -p.omega_m * e * s, //
        p.omega_m * e * s, e * (c + a * s);
    return m;
}

Matrix4d freespace_propagator(const FreeSpaceParams& p, double tau) {
    const Matrix2d m = mech_propagator(p, tau);
    Matrix4d full = Matrix4d::Identity();
    full(0, 0) = m(0, 0);
    full(0, 2) = m(0, 1);
    full(2, 0) = m(1, 0);
    full(2, 2) = m(1, 1);
    return full;
}

QuadCM propagate_freespace(const FreeSpaceParams& p, double tau, const MechInit& init) {
    p.validate();
    init.validate();
    if (tau <= 0.0) throw ConfigError("propagate_freespace: pulse length must be positive");

    const double a = 0.5 * p.gamma;
    const double w = p.omega_m;
    const double w2 = w * w;
    const double q = a * a - w2;
    const double gam = p.meas_rate;
    // momentum diffusion: thermal force plus measurement back-action
    const double spp = 2.0 * p.gamma * (p.nbar + 0.5) + 2.0 * gam;

    const Matrix2d m = mech_propagator(p, tau);
    const Matrix2d v0 = FieldCM::squeezed_thermal(init).quadratures().mat();

    // first column of M(u) (response to a momentum kick at age u)
    const auto kick = [&](double u) -> Vector2d {
        const double e = std::exp(-a * u);
        const double c = cavity::gcosh(q, u);
        const double s = cavity::gsinch(q, u);
        return {e * (c - a * s), w * e * s};
    };
    // position record built from a momentum kick, C(u) = int_0^u M_xp
    const auto record = [&](double u) { return w * int_exp_sinch(a, q, w2, u); };

    const double ic = int_exp_cosh(a, q, w2, tau);
    const double is = int_exp_sinch(a, q, w2, tau);
    const Vector2d b{ic - a * is, w * is};  // int_0^tau of column p of M
    const Vector2d c{w * is, ic + a * is};  // int_0^tau of row x of M

    // accumulated momentum diffusion filtered by the oscillator response
    const Matrix2d dmech = math::integrate(
        [&](double u) { return Matrix2d((kick(u) * kick(u).transpose()).eval()); }, 0.0, tau);
    const Matrix2d vmech = m * v0 * m.transpose() + spp * dmech;

    // diffusion correlated between the final mechanical state and the
    // position record accumulated by the phase quadrature
    const Vector2d j =
        math::integrate([&](double u) { return Vector2d(kick(u) * record(u)); }, 0.0, tau);
    // position-record moments for the phase-quadrature variance and for its
    // correlation with the untouched amplitude quadrature
    const Vector2d rec = math::integrate(
        [&](double u) {
            const double cu = record(u);
            return Vector2d{cu, cu * cu};
        },
        0.0, tau);

    const Vector2d vy = std::sqrt(4.0 * gam / tau) * (m * v0 * c + spp * j);
    const Vector2d vx = std::sqrt(gam / tau) * b;
    const double v22 = 0.5 + (4.0 * gam / tau) * (c.dot(v0 * c) + spp * rec(1));
    const double v24 = (2.0 * gam / tau) * rec(0);

    Matrix4d out;
    out << vmech(0, 0), vy(0), vmech(0, 1), vx(0), //
        vy(0), v22, vy(1), v24,                    //
        vmech(1, 0), vy(1), vmech(1, 1), vx(1),    //
        vx(0), v24, vx(1), 0.5;
    return QuadCM(out);
}

} // namespace qng::freespace
