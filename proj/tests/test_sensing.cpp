// Phase-randomized displacement sensing: channel closed forms, Fisher
// information of a Fock-resolving detector, and Cramer-Rao errors for
// heralded, bare-thermal, and Fock probes.
#include <cmath>

#include "doctest.h"

#include "qng/cavity.hpp"
#include "qng/covariance.hpp"
#include "qng/errors.hpp"
#include "qng/herald.hpp"
#include "qng/math/special.hpp"
#include "qng/sensing.hpp"

using namespace qng;

namespace {

Eigen::VectorXd thermal_dist(double n0, int len) {
    Eigen::VectorXd p(len);
    for (int k = 0; k < len; ++k) p(k) = std::pow(n0 / (1.0 + n0), k) / (1.0 + n0);
    return p;
}

Eigen::VectorXd fock_dist(int n, int len) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(len);
    p(n) = 1.0;
    return p;
}

/// Phonon distribution of a click-heralded pulse on a thermal mechanical
/// state: blue sideband adds a quantum, red subtracts one.
Eigen::VectorXd heralded_probe(Sideband side, double n0, double g, double tau) {
    CavityParams p;
    p.g = g;
    p.kappa = 1.0;
    p.gamma = 0.0;
    p.nbar = 0.0;
    p.sideband = side;
    MechInit init;
    init.n0 = n0;
    const FieldCM joint = cavity::propagate_pulse(FieldCM::squeezed_thermal(init).mat(), p, tau);
    return herald::condition_click(joint, 1.0).phonon_populations(40);
}

double crb_of(const Eigen::VectorXd& q, double nc, int kmax = 2, int copies = 500) {
    return sensing::crb(sensing::fisher_prd(q, nc, kmax), copies).delta_nc;
}

/// Direct series for the negative-upper-index Laguerre polynomial,
/// L_m^{(-k)}(x) = sum_{j=k}^m (-1)^j C(m-k, m-j) x^j / j!  (1 <= k <= m),
/// evaluated in extended precision.  The binomial kills all j < k terms.
long double laguerre_negative_series(int m, int k, long double x) {
    long double sum = 0.0L;
    for (int j = k; j <= m; ++j) {
        long double binom = 1.0L;
        for (int i = 0; i < m - j; ++i) binom = binom * (m - k - i) / (i + 1);
        long double xj = 1.0L;
        for (int i = 0; i < j; ++i) xj *= x / (i + 1);
        sum += ((j % 2 == 0) ? 1.0L : -1.0L) * binom * xj;
    }
    return sum;
}

} // namespace

TEST_CASE("displacement channel reproduces its closed forms") {
    // Zero displacement is the identity.
    const auto th = thermal_dist(0.3, 24);
    CHECK((sensing::prd_channel(th, 0.0) - th).cwiseAbs().maxCoeff() == 0.0);

    // Vacuum probe: random-phase displacement of the vacuum has Poisson
    // statistics.
    const double nc = 0.8;
    const auto pois = sensing::prd_channel(fock_dist(0, 1), nc);
    for (int n = 0; n < pois.size(); ++n) {
        const double ref = std::exp(-nc + n * std::log(nc) - math::log_factorial(n));
        CHECK(std::abs(pois(n) - ref) < 1e-12);
    }
    CHECK(std::abs(pois.sum() - 1.0) < 1e-10);

    // Single-phonon probe at unit displacement energy: the vacuum outcome
    // carries weight e^{-1} (the m=1, n=0 kernel element).
    const auto one = sensing::prd_channel(fock_dist(1, 2), 1.0);
    CHECK(one(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::abs(one.sum() - 1.0) < 1e-10);
}

TEST_CASE("channel kernel is symmetric and matches the direct series") {
    // Images of Fock basis vectors give kernel columns; the kernel between
    // levels must be symmetric because the mirrored entry reduces to the
    // same positive-index polynomial.
    const int dim = 13;
    const double nc = 0.7;
    Eigen::MatrixXd kernel(dim, dim);
    for (int m = 0; m < dim; ++m) kernel.col(m) = sensing::prd_channel(fock_dist(m, 40), nc).head(dim);
    CHECK((kernel - kernel.transpose()).cwiseAbs().maxCoeff() < 1e-15);

    // Below-diagonal entries against an extended-precision evaluation of
    // the negative-upper-index polynomial itself.
    for (double x : {0.3, 1.0, 2.4}) {
        for (int m = 1; m <= 10; ++m) {
            const auto col = sensing::prd_channel(fock_dist(m, 40), x);
            for (int n = 0; n < m; ++n) {
                const long double lag = laguerre_negative_series(m, m - n, x);
                const double ref = std::exp(math::log_factorial(m) - math::log_factorial(n) -
                                            x + (n - m) * std::log(x)) *
                                   double(lag * lag);
                CHECK(col(n) == doctest::Approx(ref).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("Fisher information: closed form, refinement, and derivative routes") {
    // Vacuum probe with a click/no-click detector: only p0 = e^{-Nc} and
    // its complement contribute, so F = e^{-Nc} / (1 - e^{-Nc}).
    for (double nc : {0.3, 1.0, 2.0}) {
        const double ref = std::exp(-nc) / (1.0 - std::exp(-nc));
        CHECK(sensing::fisher_prd(fock_dist(0, 1), nc, 0) ==
              doctest::Approx(ref).epsilon(1e-9));
    }

    // Refining the detector can only add information.
    const auto added = heralded_probe(Sideband::Blue, 0.1, 0.3, 1.0);
    for (double nc : {0.05, 0.3}) {
        double prev = 0.0;
        for (int kmax = 0; kmax <= 4; ++kmax) {
            const double f = sensing::fisher_prd(added, nc, kmax);
            CHECK(f >= prev - 1e-12);
            prev = f;
        }
    }

    // Resolving up to two quanta is already enough: the error with kmax=2
    // sits within two percent of the kmax=3 value.
    for (double nc : {0.05, 0.1, 0.3}) {
        const double e2 = crb_of(added, nc, 2);
        const double e3 = crb_of(added, nc, 3);
        CHECK(e2 >= e3);
        CHECK(e2 / e3 - 1.0 < 0.02);
    }

    // The analytic channel derivative agrees with central differences.
    const auto th = thermal_dist(0.1, 40);
    const auto channel = [&th](double x) { return sensing::prd_channel(th, x); };
    for (double nc : {0.02, 0.2, 1.0}) {
        const double analytic = sensing::fisher_prd(th, nc, 2);
        const double numeric = sensing::fisher(channel, nc, 2);
        CHECK(analytic == doctest::Approx(numeric).epsilon(1e-6));
    }
}

TEST_CASE("Cramer-Rao error bound") {
    const auto r = sensing::crb(0.5820, 500);
    CHECK_FALSE(r.infinite);
    CHECK(std::abs(r.delta_nc - 0.0586) < 1e-4);

    // Quadrupling the number of copies halves the error.
    CHECK(sensing::crb(0.5820, 2000).delta_nc ==
          doctest::Approx(0.5 * r.delta_nc).epsilon(1e-14));

    const auto zero = sensing::crb(0.0, 500);
    CHECK(zero.infinite);
    CHECK(std::isinf(zero.delta_nc));
}

TEST_CASE("probe quality ordering across the small-displacement range") {
    const auto one = fock_dist(1, 2);
    const auto vac = fock_dist(0, 1);
    const auto th = thermal_dist(0.1, 40);
    const auto added = heralded_probe(Sideband::Blue, 0.1, 0.3, 1.0);
    const auto subtracted = heralded_probe(Sideband::Red, 0.1, 0.3, 1.0);

    for (double nc : {0.01, 0.05, 0.1, 0.3, 0.5}) {
        const double e1 = crb_of(one, nc);
        const double e0 = crb_of(vac, nc);
        const double et = crb_of(th, nc);
        // Reference hierarchy: single phonon beats vacuum beats thermal.
        CHECK(e1 < e0);
        CHECK(e0 < et);
        // Heralded addition improves on the bare thermal probe; heralded
        // subtraction degrades it.
        CHECK(crb_of(added, nc) <= et);
        CHECK(crb_of(subtracted, nc) >= et);
    }
}

TEST_CASE("thermal-probe error grows approximately linearly in the energy") {
    const auto th = thermal_dist(0.1, 40);
    const int pts = 7;
    Eigen::VectorXd ncs(pts), err(pts);
    for (int i = 0; i < pts; ++i) {
        ncs(i) = 0.01 + i * (0.09 / (pts - 1));
        err(i) = crb_of(th, ncs(i));
    }
    Eigen::MatrixXd design(pts, 2);
    design.col(0).setOnes();
    design.col(1) = ncs;
    const Eigen::Vector2d fit = design.colPivHouseholderQr().solve(err);
    const Eigen::VectorXd resid = err - design * fit;
    for (int i = 0; i < pts; ++i) CHECK(std::abs(resid(i)) / err(i) < 0.05);
    CHECK(fit(1) > 0.0); // error grows with the displacement energy
}

TEST_CASE("grid evaluation matches the pointwise routines") {
    const auto th = thermal_dist(0.2, 40);
    Eigen::VectorXd grid(3);
    grid << 0.05, 0.2, 0.6;
    const auto res = sensing::sense_grid(th, grid, 2, 500);
    REQUIRE(res.fisher_info.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(res.fisher_info(i) == doctest::Approx(sensing::fisher_prd(th, grid(i), 2)));
        CHECK(res.error(i) == doctest::Approx(crb_of(th, grid(i), 2, 500)));
        CHECK(res.fisher_info(i) >= 0.0);
    }
    CHECK(res.kmax == 2);
    CHECK(res.copies == 500);
}

TEST_CASE("sensing input validation") {
    const auto vac = fock_dist(0, 1);
    CHECK_THROWS_AS(sensing::prd_channel(vac, -0.1), ConfigError);
    CHECK_THROWS_AS(sensing::prd_channel(2.0 * vac, 0.5), ConfigError);
    CHECK_THROWS_AS(sensing::fisher_prd(vac, 0.0, 2), ConfigError);
    CHECK_THROWS_AS(sensing::fisher_prd(vac, 0.5, -1), ConfigError);
    CHECK_THROWS_AS(sensing::crb(-1.0, 500), ConfigError);
    CHECK_THROWS_AS(sensing::crb(1.0, 0), ConfigError);

    // A probe concentrated at the top of its support overflows the output
    // window and must be reported, not clipped.
    CHECK_THROWS_AS(sensing::prd_channel(fock_dist(39, 40), 2.0), TruncationError);
}
