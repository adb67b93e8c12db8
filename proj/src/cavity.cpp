// cavity.cpp -- rotating-wave pulsed cavity dynamics: propagators, output
// temporal modes and the joint (mechanics, output-mode) covariance.

#include "qng/cavity.hpp"

#include <cmath>

#include "qng/errors.hpp"
#include "qng/math/gauss_legendre.hpp"
#include "qng/math/matrix_exp.hpp"
#include "qng/math/runge_kutta.hpp"

namespace qng::cavity {

using Mat6c = Eigen::Matrix<cplx, 6, 6>;
using Vec4c = Eigen::Vector4cd;

Mat4c drift(const CavityParams& p) {
    p.validate();
    const cplx ig(0.0, p.g);
    Mat4c d = Mat4c::Zero();
    d(0, 0) = d(2, 2) = -p.gamma;
    d(1, 1) = d(3, 3) = -p.kappa;
    if (p.sideband == Sideband::Blue) {
        // two-mode squeezing: daggered operators couple to undaggered ones
        d(0, 3) = -ig;
        d(1, 2) = -ig;
        d(2, 1) = ig;
        d(3, 0) = ig;
    } else {
        // beam splitter: daggered operators couple among themselves
        d(0, 1) = -ig;
        d(1, 0) = -ig;
        d(2, 3) = ig;
        d(3, 2) = ig;
    }
    return d;
}

Mat4c propagator(const CavityParams& p, double t) {
    return math::expm(Eigen::MatrixXcd(drift(p) * t));
}

double interaction_rate_sq(const CavityParams& p) {
    const double detune = 0.25 * (p.kappa - p.gamma) * (p.kappa - p.gamma);
    return (p.sideband == Sideband::Blue) ? p.g * p.g + detune : -p.g * p.g + detune;
}

double gcosh(double g2, double t) {
    const double z = g2 * t * t;
    if (std::abs(z) < 1e-8) return 1.0 + z / 2.0 + z * z / 24.0;
    if (g2 > 0.0) return std::cosh(std::sqrt(g2) * t);
    return std::cos(std::sqrt(-g2) * t);
}

double gsinch(double g2, double t) {
    const double z = g2 * t * t;
    if (std::abs(z) < 1e-8) return t * (1.0 + z / 6.0 + z * z / 120.0);
    if (g2 > 0.0) return std::sinh(std::sqrt(g2) * t) / std::sqrt(g2);
    return std::sin(std::sqrt(-g2) * t) / std::sqrt(-g2);
}

TemporalMode output_mode(const CavityParams& p, double tau) {
    p.validate();
    if (!(tau > 0.0)) throw ConfigError("pulse length tau must be positive");
    const double g2 = interaction_rate_sq(p);
    const double decay = 0.5 * (p.gamma + p.kappa);
    auto h = [g2, decay](double s) { return std::exp(-decay * s) * gsinch(g2, s); };
    const double h2 = math::integrate([&](double s) { return h(s) * h(s); }, 0.0, tau, 1e-14);
    if (!(h2 > 0.0)) throw NumericalError("output_mode: vanishing mode norm");
    const double norm = std::sqrt(h2);

    TemporalMode mode;
    mode.tau = tau;
    mode.gain = 1.0 + 2.0 * p.kappa * p.g * p.g * h2;
    mode.degenerate = (p.g == 0.0);
    mode.f = [h, norm](double s) { return h(s) / norm; };
    return mode;
}

double mode_gain(const CavityParams& p, double tau) { return output_mode(p, tau).gain; }

namespace {

/// Initial 4x4 ladder covariance: mechanics as given, cavity in vacuum.
Mat4c initial_covariance(const Mat2c& mech_init) {
    // Validates hermiticity/exchange symmetry of the mechanical block.
    const FieldCM mech{MatXc(mech_init)};
    Mat4c v0 = Mat4c::Zero();
    v0(0, 0) = mech.mat()(0, 0);
    v0(0, 2) = mech.mat()(0, 1);
    v0(2, 0) = mech.mat()(1, 0);
    v0(2, 2) = mech.mat()(1, 1);
    v0(1, 1) = v0(3, 3) = 0.5;
    return v0;
}

/// Cached propagator M(t) = exp(D t), via eigendecomposition when D is
/// well-conditioned diagonalizable, with an exponential fallback at the
/// critically damped point of the beam-splitter branch.
class PropagatorCache {
public:
    explicit PropagatorCache(const Mat4c& d) : d_(d) {
        Eigen::ComplexEigenSolver<Mat4c> es(d);
        u_ = es.eigenvectors();
        lambda_ = es.eigenvalues();
        Eigen::FullPivLU<Mat4c> lu(u_);
        use_eig_ = lu.isInvertible();
        if (use_eig_) {
            uinv_ = lu.inverse();
            // Reject near-defective decompositions by reconstruction error.
            const Mat4c rec = u_ * lambda_.asDiagonal() * uinv_;
            if ((rec - d).norm() > 1e-11 * std::max(1.0, d.norm())) use_eig_ = false;
        }
    }

    Mat4c at(double t) const {
        if (!use_eig_) return math::expm(Eigen::MatrixXcd(d_ * t));
        Vec4c e;
        for (int i = 0; i < 4; ++i) e(i) = std::exp(lambda_(i) * t);
        return u_ * e.asDiagonal() * uinv_;
    }

private:
    Mat4c d_;
    Mat4c u_, uinv_;
    Vec4c lambda_;
    bool use_eig_ = true;
};

constexpr int kExchange4[4] = {2, 3, 0, 1}; // u_k^dag = u_{X(k)} for 2 modes

} // namespace

FieldCM propagate_pulse(const Mat2c& mech_init, const CavityParams& p, double tau) {
    const TemporalMode mode = output_mode(p, tau);
    const Mat4c d4 = drift(p);

    // Augmented drift over (b^dag, a^dag, A^dag, b, a, A); the accumulator
    // rows depend on time through the mode shape.
    Mat6c dc = Mat6c::Zero();
    const int map[4] = {0, 1, 3, 4}; // embed 4x4 indices into the 6x6 layout
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) dc(map[i], map[j]) = d4(i, j);

    const double sq2k = std::sqrt(2.0 * p.kappa);
    const double heat = 2.0 * p.gamma * (p.nbar + 0.5);

    auto rhs = [&](double t, const Mat6c& v) {
        const double f = mode.f(t);
        Mat6c d = dc;
        d(2, 1) = sq2k * f; // dA^dag/dt picks up sqrt(2k) f a^dag
        d(5, 4) = sq2k * f;
        Mat6c fm = Mat6c::Zero();
        fm(0, 0) = fm(3, 3) = heat;
        fm(1, 1) = fm(4, 4) = p.kappa;
        fm(1, 2) = fm(2, 1) = -0.5 * sq2k * f; // A accumulates -f a_in
        fm(4, 5) = fm(5, 4) = -0.5 * sq2k * f;
        fm(2, 2) = fm(5, 5) = 0.5 * f * f;
        return Mat6c(d * v + v * d.adjoint() + fm);
    };

    Mat6c v = Mat6c::Zero();
    const Mat4c v4 = initial_covariance(mech_init);
    v(0, 0) = v4(0, 0);
    v(0, 3) = v4(0, 2);
    v(3, 0) = v4(2, 0);
    v(3, 3) = v4(2, 2);
    v(1, 1) = v(4, 4) = 0.5;

    math::integrate_adaptive(v, rhs, 0.0, tau, 1e-10, 1e-12, tau / 10.0);

    const FieldCM joint{MatXc(0.5 * (v + v.adjoint()))};
    return joint.marginal({0, 2});
}

FieldCM covariance_by_quadrature(const Mat2c& mech_init, const CavityParams& p, double tau) {
    const TemporalMode mode = output_mode(p, tau);
    const PropagatorCache prop(drift(p));

    const double sq2k = std::sqrt(2.0 * p.kappa);
    Vec4c ncoef; // input-noise coupling N = diag(sqrt(2 gamma), sqrt(2 kappa), ..)
    ncoef << std::sqrt(2.0 * p.gamma), sq2k, std::sqrt(2.0 * p.gamma), sq2k;
    Vec4c svec; // symmetrized bath intensity diag(nbar + 1/2, 1/2, ..)
    svec << p.nbar + 0.5, 0.5, p.nbar + 0.5, 0.5;

    // Projection of the output mode on the initial operators:
    // w_k = sqrt(2 kappa) int f(s) M(s)_{a,k} ds.
    const Vec4c w = sq2k * math::integrate(
                               [&](double s) {
                                   return Vec4c(mode.f(s) * prop.at(s).row(3).transpose());
                               },
                               0.0, tau, 1e-12);

    // Linear map from u(0) to (b^dag(tau), A^dag, b(tau), A).
    const Mat4c mtau = prop.at(tau);
    Mat4c l = Mat4c::Zero();
    l.row(0) = mtau.row(0);
    l.row(2) = mtau.row(2);
    for (int j = 0; j < 4; ++j) {
        l(3, j) = w(j);
        l(1, j) = std::conj(w(kExchange4[j]));
    }

    const Mat4c init_part = l * initial_covariance(mech_init) * l.adjoint();

    // Noise rows C(s): contribution of the bath operators n(s) to the four
    // output operators.  The accumulator row needs the inner integral
    // K(s) = sqrt(2 kappa) int_s^tau f(s') M(s'-s) ds' (a-row), minus the
    // directly reflected -f(s) a_in(s).
    auto noise_rows = [&](double s) {
        const Mat4c mts = prop.at(tau - s);
        const Vec4c inner = math::integrate(
            [&](double sp) { return Vec4c(mode.f(sp) * prop.at(sp - s).row(3).transpose()); }, s,
            tau, 1e-12);
        Mat4c c = Mat4c::Zero();
        for (int j = 0; j < 4; ++j) {
            c(0, j) = mts(0, j) * ncoef(j);
            c(2, j) = mts(2, j) * ncoef(j);
            c(3, j) = sq2k * inner(j) * ncoef(j);
        }
        c(3, 3) -= mode.f(s); // -f(s) a_in(s)
        for (int j = 0; j < 4; ++j) c(1, j) = std::conj(c(3, kExchange4[j]));
        return c;
    };

    const Mat4c noise_part = math::integrate(
        [&](double s) {
            const Mat4c c = noise_rows(s);
            return Mat4c(c * svec.asDiagonal() * c.adjoint());
        },
        0.0, tau, 1e-11);

    return FieldCM{MatXc(init_part + noise_part)};
}

} // namespace qng::cavity
