// propagator_oracle.hpp -- closed-form rotating-wave propagator, derived by
// hand from the 2x2 block structure of the drift: with G^2 = +-g^2 +
// (kappa-gamma)^2/4 and E = e^{-(gamma+kappa)t/2},
//   M_bb = E [cosh(G t) + (kappa-gamma)/(2G) sinh(G t)],
//   M_aa = E [cosh(G t) - (kappa-gamma)/(2G) sinh(G t)],
// and the couplings are -i g E sinh(G t)/G on the daggered rows,
// +i g E sinh(G t)/G on the undaggered ones.  Fully independent of the
// production matrix-exponential path.
#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "qng/params.hpp"

namespace qng_test {

inline double oracle_cosh(double g2, double t) {
    if (g2 >= 0.0) return std::cosh(std::sqrt(g2) * t);
    return std::cos(std::sqrt(-g2) * t);
}

inline double oracle_sinch(double g2, double t) {
    if (g2 == 0.0) return t;
    if (g2 > 0.0) return std::sinh(std::sqrt(g2) * t) / std::sqrt(g2);
    return std::sin(std::sqrt(-g2) * t) / std::sqrt(-g2);
}

inline Eigen::Matrix4cd closed_form_propagator(const qng::CavityParams& p, double t) {
    using cplx = std::complex<double>;
    const double half = 0.5 * (p.kappa - p.gamma);
    const double g2 = (p.sideband == qng::Sideband::Blue) ? p.g * p.g + half * half
                                                          : -p.g * p.g + half * half;
    const double e = std::exp(-0.5 * (p.gamma + p.kappa) * t);
    const double c = oracle_cosh(g2, t);
    const double s = oracle_sinch(g2, t);
    const double mbb = e * (c + half * s);
    const double maa = e * (c - half * s);
    const cplx down = cplx(0.0, -p.g) * e * s; // daggered-row coupling
    const cplx up = cplx(0.0, p.g) * e * s;    // undaggered-row coupling

    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(2, 2) = mbb;
    m(1, 1) = m(3, 3) = maa;
    if (p.sideband == qng::Sideband::Blue) {
        m(0, 3) = down;
        m(1, 2) = down;
        m(2, 1) = up;
        m(3, 0) = up;
    } else {
        m(0, 1) = down;
        m(1, 0) = down;
        m(2, 3) = up;
        m(3, 2) = up;
    }
    return m;
}

} // namespace qng_test
