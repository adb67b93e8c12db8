#include "qng/herald.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "qng/cavity.hpp"
#include "qng/errors.hpp"
#include "qng/math/exp_taylor.hpp"
#include "qng/math/gauss_hermite.hpp"
#include "qng/math/special.hpp"

namespace qng::herald {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

void check_eta(double eta) {
    if (!(eta > 0.0) || eta > 1.0)
        throw ConfigError("detector efficiency must lie in (0, 1]");
}

Mat2c exchange2() {
    Mat2c x;
    x << 0, 1, 1, 0;
    return x;
}

/// Single-mode ladder -> quadrature map, Omega_1 = 1/sqrt2 [[i, -i], [1, 1]].
Mat2c omega1() {
    Mat2c w;
    w << kI, -kI, 1, 1;
    return w / std::sqrt(2.0);
}

Eigen::Matrix2d ladder1_to_quad(const Mat2c& v) {
    const Mat2c q = omega1() * v * omega1().adjoint();
    if (q.imag().cwiseAbs().maxCoeff() > 1e-7)
        throw NumericalError("ladder covariance is not a physical-state matrix");
    return q.real();
}

Mat2c quad1_to_ladder(const Eigen::Matrix2d& q) {
    return omega1().adjoint() * q.cast<cplx>() * omega1();
}

/// Per-mode 2x2 blocks of a two-mode quadrature covariance
/// (global ordering p1, p2, x1, x2).
struct QuadBlocks {
    Eigen::Matrix2d v1, v2, c;
};

QuadBlocks quad_blocks(const Eigen::MatrixXd& q) {
    const int i1[2] = {0, 2}, i2[2] = {1, 3};
    QuadBlocks b;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            b.v1(r, c) = q(i1[r], i1[c]);
            b.v2(r, c) = q(i2[r], i2[c]);
            b.c(r, c) = q(i1[r], i2[c]);
        }
    return b;
}

/// Wigner function of a zero-mean Gaussian state with ladder covariance v.
double gauss_wigner(const Mat2c& v, cplx alpha) {
    const Eigen::Matrix2d b = ladder1_to_quad(v);
    const Eigen::Vector2d u(std::sqrt(2.0) * alpha.imag(),  // p
                            std::sqrt(2.0) * alpha.real()); // x
    const double det = b.determinant();
    if (det <= 0.0)
        throw NumericalError("Gaussian component has non-positive covariance");
    return std::exp(-0.5 * u.dot(b.inverse() * u)) / (kPi * std::sqrt(det));
}

/// Click weight of a bucket detector: probability that n photons yield at
/// least one detection event.
double click_weight(double eta, int n) { return 1.0 - std::pow(1.0 - eta, n); }

/// Click probabilities below this floor are indistinguishable from the
/// propagator's integration residue and provide no usable herald.
constexpr double kMinClickProb = 1e-9;

/// Kernel data shared by all photon-number-resolved quantities of one joint
/// state: the conditional-Wigner matrices (l, a, zmap) and the
/// photon-number generator a_p with their determinant prefactors.
struct SeriesKernel {
    double p0 = 0.0;
    Mat2c l, a, zmap;
    double sq_det = 1.0; ///< sqrt det(I + X R_mm)
    Mat2c a_p;
    double sq_det_p = 1.0; ///< sqrt det(I - X R_mm)
};

double real_sqrt_det(const Mat2c& m, const char* what) {
    const cplx d = m.determinant();
    if (std::abs(d.imag()) > 1e-9 * std::max(1.0, std::abs(d)) || d.real() <= 0.0)
        throw NumericalError(std::string("determinant of ") + what +
                             " is not positive real; state outside the supported regime");
    return std::sqrt(d.real());
}

SeriesKernel series_kernel(const FieldCM& joint) {
    const BargmannKernel k = bargmann_kernel(joint);
    const Mat2c x2 = exchange2();
    const Mat2c id = Mat2c::Identity();
    const Mat2c ixr = id + x2 * k.mm;
    const Mat2c ixr_inv = ixr.inverse();
    const Mat2c ipr = id - x2 * k.mm;

    SeriesKernel s;
    s.p0 = k.p0;
    s.l = ixr_inv * ipr;
    s.a = k.cc - k.cm * ixr_inv * x2 * k.mc;
    s.zmap = 2.0 * k.cm * ixr_inv;
    s.sq_det = real_sqrt_det(ixr, "the conditional-Wigner normalization");
    s.a_p = k.cc + k.cm * ipr.inverse() * x2 * k.mc;
    s.sq_det_p = real_sqrt_det(ipr, "the photon-number generator");
    return s;
}

/// Photon-number distribution p(0..nmax) of the detected mode.
Eigen::VectorXd photon_dist(const SeriesKernel& k, int nmax) {
    const Eigen::MatrixXcd c =
        math::exp_taylor_2(k.a_p, Eigen::Vector2cd::Zero(), nmax, nmax);
    Eigen::VectorXd p(nmax + 1);
    for (int n = 0; n <= nmax; ++n)
        p(n) = k.p0 * c(n, n).real() / k.sq_det_p;
    return p;
}

} // namespace

double HeraldedState::weight_sum() const {
    double s = 0.0;
    for (const auto& c : components)
        s += c.weight;
    return s;
}

double HeraldedState::mean_occupation() const {
    double n = 0.0;
    for (const auto& c : components)
        n += c.weight * (c.v(0, 0).real() - 0.5);
    return n;
}

double HeraldedState::wigner(cplx alpha) const {
    double w = 0.0;
    for (const auto& c : components)
        w += c.weight * gauss_wigner(c.v, alpha);
    return w;
}

Eigen::VectorXd HeraldedState::phonon_populations(int nmax,
                                                  const std::optional<SqueezeFrame>& frame) const {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(nmax + 1);
    for (const auto& c : components)
        p += c.weight * gaussian_phonon_populations(c.v, nmax, frame);
    return p;
}

Eigen::VectorXd gaussian_phonon_populations(const Mat2c& v, int nmax,
                                            const std::optional<SqueezeFrame>& frame) {
    Mat2c w = v;
    if (frame && frame->r != 0.0) {
        // populations in the basis S(z)|n> are the plain Fock populations of
        // the counter-squeezed state S(z)^dag rho S(z)
        const FieldCM f = apply_squeeze(FieldCM(MatXc(v)), 0, -frame->r, frame->phi);
        w = f.mat();
    }
    return gaussian_fock_populations(w, nmax);
}

NoClickResult condition_noclick(const FieldCM& joint, double eta) {
    check_eta(eta);
    if (joint.modes() != 2)
        throw ConfigError("conditioning expects a (mechanics, output) two-mode state");

    // "no click" on a bucket detector is the Gaussian operator
    // (1-eta)^{n} = (1/eta) rho_th(ntilde), ntilde = (1-eta)/eta, so the
    // update is a Gaussian measurement with noise covariance (ntilde+1/2) I.
    const double ntilde = (1.0 - eta) / eta;
    const QuadBlocks b = quad_blocks(joint.quadratures().mat());
    const Eigen::Matrix2d m =
        b.v2 + (ntilde + 0.5) * Eigen::Matrix2d::Identity();
    const double det = m.determinant();
    if (det <= 0.0)
        throw NumericalError("measurement covariance is not positive definite");

    NoClickResult out;
    out.probability = (1.0 / eta) / std::sqrt(det);
    const Eigen::Matrix2d v1 = b.v1 - b.c * m.inverse() * b.c.transpose();
    out.v = quad1_to_ladder(v1);
    return out;
}

HeraldedState condition_click(const FieldCM& joint, double eta) {
    const NoClickResult nc = condition_noclick(joint, eta);
    const double pc = 1.0 - nc.probability;
    if (pc < kMinClickProb)
        throw NoClickSupport("click probability vanishes for this pulse");

    HeraldedState st;
    st.probability = pc;
    st.components.push_back({1.0 / pc, Mat2c(joint.marginal({0}).mat())});
    st.components.push_back({-nc.probability / pc, nc.v});
    return st;
}

FockSeriesState condition_click_series(const FieldCM& joint, double eta, double tail_tol) {
    check_eta(eta);
    const SeriesKernel k = series_kernel(joint);

    // extend the photon-number distribution until its missing tail mass is
    // negligible; the distribution always sums to one
    int cap = 16;
    Eigen::VectorXd p;
    for (;;) {
        p = photon_dist(k, cap);
        if (1.0 - p.sum() < tail_tol)
            break;
        if (cap >= 256)
            throw TruncationError("photon-number series did not converge by n = 256");
        cap *= 2;
    }

    double p_click = 0.0;
    for (int n = 1; n <= cap; ++n)
        p_click += click_weight(eta, n) * p(n);
    if (p_click < kMinClickProb)
        throw NoClickSupport("click probability vanishes for this pulse");

    // keep every photon number up to the point where the cumulative mass is
    // complete; individual weights may be non-monotone (squeezed light has
    // even-odd structure), so no per-term cut is safe
    int used = 1;
    double cum = p(0);
    for (int n = 1; n <= cap; ++n) {
        cum += p(n);
        used = n;
        if (1.0 - cum < tail_tol)
            break;
    }

    FockSeriesState st;
    st.probability = p_click;
    for (int n = 1; n <= used; ++n) {
        const double cw = click_weight(eta, n);
        SeriesTerm t;
        t.weight = cw * p(n) / p_click;
        t.n2 = n;
        t.l = k.l;
        t.a = k.a;
        t.zmap = k.zmap;
        t.pref = (2.0 * k.p0 / kPi) * cw / (k.sq_det * p_click);
        st.terms.push_back(t);
    }
    return st;
}

double FockSeriesState::wigner(cplx alpha) const {
    if (terms.empty())
        return 0.0;
    int n2max = 0;
    for (const auto& t : terms)
        n2max = std::max(n2max, t.n2);

    Eigen::Vector2cd v(std::conj(alpha), alpha);
    const double env = std::exp(-(v.adjoint() * terms[0].l * v)(0, 0).real());
    const Eigen::Vector2cd z = terms[0].zmap * v;
    const Eigen::MatrixXcd c = math::exp_taylor_2(terms[0].a, z, n2max, n2max);

    double w = 0.0;
    for (const auto& t : terms)
        w += t.pref * env * c(t.n2, t.n2).real();
    return w;
}

Eigen::VectorXd FockSeriesState::phonon_populations(int nmax,
                                                    const std::optional<SqueezeFrame>& frame) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nmax + 1);
    if (terms.empty())
        return out;

    int n2max = 0;
    for (const auto& t : terms)
        n2max = std::max(n2max, t.n2);

    // Phase-space inversion of the squeezed-Fock basis: the Wigner function
    // of S(z)|n><n|S^dag at alpha is W_n(m(alpha)) with
    // m(alpha) = cosh(r) alpha + e^{i phi} sinh(r) alpha^*.
    const double r = frame ? frame->r : 0.0;
    const double phi = frame ? frame->phi : 0.0;
    const double ch = std::cosh(r), sh = std::sinh(r);
    const cplx eip = std::exp(kI * phi);
    const auto m_of = [&](cplx al) { return ch * al + eip * sh * std::conj(al); };

    // Combined Gaussian envelope of state and basis, E = Re v^dag L v +
    // 2 |m(alpha)|^2, as a real quadratic form over (Re alpha, Im alpha).
    const Mat2c& l = terms[0].l;
    const auto expo = [&](double x, double y) {
        const cplx al(x, y);
        const Eigen::Vector2cd v(std::conj(al), al);
        return (v.adjoint() * l * v)(0, 0).real() + 2.0 * std::norm(m_of(al));
    };
    const double q11 = expo(1.0, 0.0);
    const double q22 = expo(0.0, 1.0);
    const double q12 = 0.5 * (expo(1.0, 1.0) - q11 - q22);
    Eigen::Matrix2d q;
    q << q11, q12, q12, q22;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
    const Eigen::Vector2d d = es.eigenvalues();
    if (d.minCoeff() <= 0.0)
        throw NumericalError("conditional Wigner envelope is not integrable");

    // After diagonalizing the envelope the overlap integrand is a
    // polynomial of degree 2 n2max + 2 nmax times exp(-w^T w): a tensor
    // Gauss-Hermite rule of matching order is exact.  The summand is
    // evaluated with the Gaussians attached to their polynomials (modified
    // weights, explicit envelope, scaled Laguerre e^{-x/2} L_n(x)), keeping
    // every factor on a bounded scale.
    const int order = n2max + nmax + 3;
    const math::HermiteRule rule = math::gauss_hermite(order);

    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n2max + 1, nmax + 1);
    Eigen::VectorXd cd(n2max + 1), ln(nmax + 1);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            const double w2 = rule.wexp[i] * rule.wexp[j];
            const Eigen::Vector2d u =
                es.eigenvectors() * Eigen::Vector2d(rule.node[i] / std::sqrt(d(0)),
                                                    rule.node[j] / std::sqrt(d(1)));
            const cplx al(u(0), u(1));
            const Eigen::Vector2cd v(std::conj(al), al);
            const Eigen::Vector2cd z = terms[0].zmap * v;
            const double env = std::exp(-(v.adjoint() * l * v)(0, 0).real());
            const Eigen::MatrixXcd c = math::exp_taylor_2(terms[0].a, z, n2max, n2max);
            for (int n2 = 0; n2 <= n2max; ++n2)
                cd(n2) = env * c(n2, n2).real();
            const double m2 = 4.0 * std::norm(m_of(al));
            // scaled Laguerre values e^{-m2/2} L_n(m2) by upward recurrence
            double lm = 0.0, lk = std::exp(-0.5 * m2);
            for (int n = 0; n <= nmax; ++n) {
                ln(n) = lk;
                const double lnext = ((2 * n + 1 - m2) * lk - n * lm) / (n + 1);
                lm = lk;
                lk = lnext;
            }
            s += w2 * cd * ln.transpose();
        }

    const double jac = 1.0 / std::sqrt(d(0) * d(1));
    for (const auto& t : terms)
        for (int n = 0; n <= nmax; ++n) {
            const double parity = (n % 2 == 0) ? 1.0 : -1.0;
            out(n) += 2.0 * jac * t.pref * parity * s(t.n2, n);
        }
    return out;
}

Eigen::VectorXd output_photon_distribution(const FieldCM& joint, int nmax) {
    return photon_dist(series_kernel(joint), nmax);
}

HeraldedState multipulse_heralded(const Mat2c& mech0, const CavityParams& p, double tau,
                                  double eta, int pulses, double prune) {
    check_eta(eta);
    if (pulses < 1)
        throw ConfigError("at least one heralding pulse is required");
    if (!(tau > 0.0))
        throw ConfigError("pulse length must be positive");

    std::vector<GaussComponent> comps{{1.0, mech0}};
    double prob_total = 1.0;

    for (int round = 0; round < pulses; ++round) {
        std::vector<GaussComponent> next;
        next.reserve(2 * comps.size());
        double p_round = 0.0;
        for (const auto& c : comps) {
            const FieldCM joint = cavity::propagate_pulse(c.v, p, tau);
            const NoClickResult nc = condition_noclick(joint, eta);
            p_round += c.weight * (1.0 - nc.probability);
            next.push_back({c.weight, Mat2c(joint.marginal({0}).mat())});
            next.push_back({-c.weight * nc.probability, nc.v});
        }
        if (p_round < kMinClickProb)
            throw NoClickSupport("click probability vanishes in a heralding round");

        for (auto& c : next)
            c.weight /= p_round;
        prob_total *= p_round;

        // drop negligible components, then restore the exact unit weight sum
        std::vector<GaussComponent> kept;
        kept.reserve(next.size());
        for (const auto& c : next)
            if (std::abs(c.weight) >= prune)
                kept.push_back(c);
        if (kept.empty())
            throw NumericalError("all mixture components fell below the pruning threshold");
        double sum = 0.0;
        for (const auto& c : kept)
            sum += c.weight;
        for (auto& c : kept)
            c.weight /= sum;
        comps = std::move(kept);
    }
    return {std::move(comps), prob_total};
}

} // namespace qng::herald
