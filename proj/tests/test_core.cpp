// test_core.cpp -- tests of the Gaussian-state core: covariance
// representations, physicality/purity, Gaussian unitaries and the
// coherent-state kernel with its exact Fock expansion.

#include <cmath>
#include <complex>

#include "doctest.h"

#include "qng/bargmann.hpp"
#include "qng/covariance.hpp"
#include "qng/errors.hpp"
#include "qng/math/special.hpp"
#include "qng/params.hpp"

using qng::cplx;
using qng::FieldCM;
using qng::QuadCM;

TEST_CASE("ladder-to-quadrature map is unitary and fixes the vacuum") {
    for (int n : {1, 2, 3}) {
        const qng::MatXc omega = qng::ladder_to_quad(n);
        CHECK((omega * omega.adjoint() - qng::MatXc::Identity(2 * n, 2 * n)).norm() < 1e-14);
        const QuadCM vac = FieldCM::vacuum(n).quadratures();
        CHECK((vac.mat() - 0.5 * qng::MatX::Identity(2 * n, 2 * n)).norm() < 1e-14);
    }
}

TEST_CASE("squeezed thermal initial state: moments and variances") {
    const double n0 = 0.1, r = 1.0;
    // Squeezing phase pi/2 puts the pair moment on the imaginary axis:
    // <b b> = -(n0 + 1/2) e^{i phi0} sinh 2r.
    const FieldCM v = FieldCM::squeezed_thermal({n0, r, M_PI / 2});
    CHECK(std::abs(v.pair_moment(0) - cplx(0.0, -2.1761162447082113)) < 1e-12);
    CHECK(v.mean_occupation(0) ==
          doctest::Approx(n0 * std::cosh(2 * r) + std::sinh(r) * std::sinh(r)).epsilon(1e-13));

    // Phase 0 squeezes the position quadrature: Var x = (n0+1/2) e^{-2r},
    // Var p = (n0+1/2) e^{+2r}; ordering of the quadrature vector is (p, x).
    const QuadCM q = FieldCM::squeezed_thermal({n0, r, 0.0}).quadratures();
    CHECK(q.mat()(1, 1) == doctest::Approx((n0 + 0.5) * std::exp(-2 * r)).epsilon(1e-12));
    CHECK(q.mat()(0, 0) == doctest::Approx((n0 + 0.5) * std::exp(2 * r)).epsilon(1e-12));
    CHECK(std::abs(q.mat()(0, 1)) < 1e-14);

    // Heisenberg-physical, and purity matches the thermal value 1/(2 n0 + 1)
    // (squeezing is unitary, so it cannot change the purity).
    CHECK(q.is_physical());
    CHECK(q.purity() == doctest::Approx(1.0 / (2 * n0 + 1)).epsilon(1e-12));
}

TEST_CASE("physicality check rejects sub-Heisenberg matrices") {
    qng::MatX bad(2, 2);
    bad << 0.3, 0.0, 0.0, 0.3; // both variances below the vacuum level
    CHECK_FALSE(QuadCM(bad).is_physical());
    qng::MatX edge(2, 2);
    edge << 0.5, 0.0, 0.0, 0.5;
    CHECK(QuadCM(edge).is_physical());
}

TEST_CASE("tensor products and marginals are mutually inverse") {
    const FieldCM mech = FieldCM::squeezed_thermal({0.3, 0.4, 1.1});
    const FieldCM opt = FieldCM::thermal(0.05);
    const FieldCM joint = FieldCM::tensor(mech, opt);
    CHECK(joint.modes() == 2);
    CHECK((joint.marginal({0}).mat() - mech.mat()).norm() < 1e-14);
    CHECK((joint.marginal({1}).mat() - opt.mat()).norm() < 1e-14);
    // Round trip through quadratures.
    const FieldCM back = joint.quadratures().field();
    CHECK((back.mat() - joint.mat()).norm() < 1e-12);
}

TEST_CASE("Gaussian overlap: closed thermal form and purity consistency") {
    const double n1 = 0.4, n2 = 1.3;
    const QuadCM a = FieldCM::thermal(n1).quadratures();
    const QuadCM b = FieldCM::thermal(n2).quadratures();
    CHECK(qng::gaussian_overlap(a, b) == doctest::Approx(1.0 / (n1 + n2 + 1)).epsilon(1e-13));
    CHECK(qng::gaussian_overlap(a, a) == doctest::Approx(a.purity()).epsilon(1e-13));
}

TEST_CASE("squeeze unitary: state action, inverse, factory consistency") {
    const FieldCM th = FieldCM::thermal(0.1);
    const double r = 0.9, phi = 0.7;
    const FieldCM sq = qng::apply_squeeze(th, 0, r, phi);
    // Same state as the squeezed-thermal factory with phi0 = phi.
    const FieldCM ref = FieldCM::squeezed_thermal({0.1, r, phi});
    CHECK((sq.mat() - ref.mat()).norm() < 1e-13);
    // Squeezing the vacuum gives occupation sinh^2 r.
    const FieldCM sv = qng::apply_squeeze(FieldCM::vacuum(1), 0, r, phi);
    CHECK(sv.mean_occupation(0) == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-13));
    // Applying the opposite squeeze restores the original state.
    const FieldCM undo = qng::apply_squeeze(sq, 0, -r, phi);
    CHECK((undo.mat() - th.mat()).norm() < 1e-13);
}

TEST_CASE("coherent-state kernel: vacuum and thermal closed forms") {
    const auto kv = qng::bargmann_kernel(FieldCM::vacuum(2));
    CHECK(kv.p0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kv.rt.norm() < 1e-14);

    const double n = 0.7;
    const auto kt = qng::bargmann_kernel(FieldCM::tensor(FieldCM::thermal(n), FieldCM::vacuum(1)));
    CHECK(kt.p0 == doctest::Approx(1.0 / (n + 1)).epsilon(1e-13));
    // Mechanical block couples beta1* and alpha1 with weight n/(n+1).
    CHECK(std::abs(kt.mm(0, 1) - cplx(n / (n + 1), 0.0)) < 1e-13);
    CHECK(std::abs(kt.mm(1, 0) - cplx(n / (n + 1), 0.0)) < 1e-13);
    CHECK(std::abs(kt.mm(0, 0)) < 1e-14);
    CHECK(kt.mc.norm() < 1e-14);
    CHECK(kt.cc.norm() < 1e-14);
    // Kernel matrix is symmetric.
    CHECK((kt.rt - kt.rt.transpose()).norm() < 1e-14);
}

TEST_CASE("exact Fock expansion of Gaussian states") {
    // Thermal state: geometric photon-number law.
    const double n = 0.6;
    const qng::Mat2c vt = (n + 0.5) * qng::Mat2c::Identity();
    const auto pt = qng::gaussian_fock_populations(vt, 20);
    for (int k = 0; k <= 20; ++k) {
        const double expect = std::pow(n / (n + 1), k) / (n + 1);
        CHECK(pt(k) == doctest::Approx(expect).epsilon(1e-12));
    }

    // Squeezed vacuum: odd populations vanish, even ones follow
    // p_{2m} = (2m)! tanh^{2m} r / (4^m (m!)^2 cosh r).
    const double r = 0.8;
    const FieldCM sv = qng::apply_squeeze(FieldCM::vacuum(1), 0, r, 0.3);
    const auto ps = qng::gaussian_fock_populations(sv.mat(), 16);
    for (int m = 0; m <= 8; ++m) {
        const double expect = qng::math::factorial(2 * m) * std::pow(std::tanh(r), 2 * m) /
                              (std::pow(4.0, m) * std::pow(qng::math::factorial(m), 2) *
                               std::cosh(r));
        CHECK(ps(2 * m) == doctest::Approx(expect).epsilon(1e-11));
        if (m < 8) CHECK(std::abs(ps(2 * m + 1)) < 1e-14);
    }

    // Squeezed thermal: the Fock matrix is Hermitian, positive, unit trace.
    const FieldCM st = FieldCM::squeezed_thermal({0.2, 0.8, 1.9});
    const Eigen::MatrixXcd rho = qng::gaussian_fock_matrix(st.mat(), 90);
    CHECK((rho - rho.adjoint()).norm() < 1e-12);
    CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("parameter validation raises configuration errors") {
    qng::MechInit bad{-0.2, 0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), qng::ConfigError);
    qng::CavityParams cp;
    cp.kappa = 0.0;
    CHECK_THROWS_AS(cp.validate(), qng::ConfigError);
    qng::FreeSpaceParams fp;
    fp.omega_m = -1.0;
    CHECK_THROWS_AS(fp.validate(), qng::ConfigError);
}
