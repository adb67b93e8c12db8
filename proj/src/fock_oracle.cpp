#include "qng/fock_oracle.hpp"

#include <cmath>

#include "qng/errors.hpp"

namespace qng {

namespace {

Eigen::Matrix4cd kernel_matrix(const FieldCM& joint) {
    if (joint.modes() != 2)
        throw ConfigError("Fock expansion expects a two-mode state");
    return bargmann_kernel(joint).rt;
}

} // namespace

TwoModeFock::TwoModeFock(const FieldCM& joint, int nmech, int nopt)
    : nm_(nmech), no_(nopt), p0_(bargmann_kernel(joint).p0),
      tab_(kernel_matrix(joint), {nmech, nopt, nmech, nopt}) {
    if (nmech < 0 || nopt < 0)
        throw ConfigError("Fock truncations must be non-negative");
}

cplx TwoModeFock::element(int n1, int n2, int m1, int m2) const {
    // kernel variables are ordered (beta1*, beta2*, alpha1, alpha2):
    // bra indices first, then ket indices
    return p0_ * tab_(n1, n2, m1, m2);
}

double TwoModeFock::trace() const {
    double t = 0.0;
    for (int k = 0; k <= nm_; ++k)
        for (int l = 0; l <= no_; ++l)
            t += element(k, l, k, l).real();
    return t;
}

void TwoModeFock::require_trace(double tol) const {
    const double deficit = 1.0 - trace();
    if (std::abs(deficit) > tol)
        throw TruncationError("Fock truncation leaves trace deficit " +
                              std::to_string(deficit));
}

double TwoModeFock::probability_optical(int n2) const {
    double p = 0.0;
    for (int k = 0; k <= nm_; ++k)
        p += element(k, n2, k, n2).real();
    return p;
}

Eigen::MatrixXcd TwoModeFock::conditional_mech(int n2) const {
    Eigen::MatrixXcd rho(nm_ + 1, nm_ + 1);
    for (int n = 0; n <= nm_; ++n)
        for (int m = 0; m <= nm_; ++m)
            rho(n, m) = element(n, n2, m, n2);
    const double p = rho.trace().real();
    if (p <= 0.0)
        throw NumericalError("conditioning on an outcome of vanishing probability");
    return rho / p;
}

double TwoModeFock::click_probability(double eta) const {
    double p = 0.0;
    for (int n2 = 1; n2 <= no_; ++n2)
        p += (1.0 - std::pow(1.0 - eta, n2)) * probability_optical(n2);
    return p;
}

Eigen::MatrixXcd TwoModeFock::click_conditioned(double eta) const {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(nm_ + 1, nm_ + 1);
    for (int n2 = 1; n2 <= no_; ++n2) {
        const double w = 1.0 - std::pow(1.0 - eta, n2);
        for (int n = 0; n <= nm_; ++n)
            for (int m = 0; m <= nm_; ++m)
                rho(n, m) += w * element(n, n2, m, n2);
    }
    const double p = rho.trace().real();
    if (p <= 0.0)
        throw NumericalError("click probability vanishes in the Fock expansion");
    return rho / p;
}

Eigen::VectorXd TwoModeFock::phonon_populations_click(double eta, int nmax) const {
    if (nmax > nm_)
        throw ConfigError("requested populations beyond the Fock truncation");
    const Eigen::MatrixXcd rho = click_conditioned(eta);
    Eigen::VectorXd p(nmax + 1);
    for (int n = 0; n <= nmax; ++n)
        p(n) = rho(n, n).real();
    return p;
}

} // namespace qng
