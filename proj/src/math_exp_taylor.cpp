// math_exp_taylor.cpp -- recurrences for Taylor coefficients of exponentials
// of quadratic forms.
//
// For F(s) = exp(1/2 s^T A s + z^T s) the identity  dF/ds_i = (z_i + sum_j
// A_ij s_j) F  turns into a closed recurrence on the coefficients c_k of the
// multivariate power series.  With the factorial scaling chat_k =
// sqrt(prod k_i!) c_k the recurrence reads (k_i >= 1, e_i a unit index):
//
//   chat_k = z_i / sqrt(k_i) chat_{k-e_i}
//          + sum_j A_ij sqrt((k_j - delta_ij) / k_i) chat_{k-e_i-e_j},
//
// which keeps all intermediates on the scale of the physical quantities
// they eventually become (density-matrix entries, probabilities).

#include "qng/math/exp_taylor.hpp"

#include "qng/errors.hpp"

namespace qng::math {

Eigen::MatrixXcd exp_taylor_2(const Eigen::Matrix2cd& a, const Eigen::Vector2cd& z,
                              int jmax, int kmax) {
    if (jmax < 0 || kmax < 0) throw NumericalError("exp_taylor_2: negative cutoff");
    const Eigen::Matrix2cd s = 0.5 * (a + a.transpose());
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(jmax + 1, kmax + 1);
    c(0, 0) = 1.0;
    for (int j = 0; j <= jmax; ++j) {
        for (int k = 0; k <= kmax; ++k) {
            if (j == 0 && k == 0) continue;
            // Reduce along the first variable with j >= 1, else the second.
            if (j >= 1) {
                cplx acc = z(0) / std::sqrt(static_cast<double>(j)) * c(j - 1, k);
                if (j >= 2)
                    acc += s(0, 0) * std::sqrt((j - 1.0) / j) * c(j - 2, k);
                if (k >= 1)
                    acc += s(0, 1) * std::sqrt(static_cast<double>(k) / j) * c(j - 1, k - 1);
                c(j, k) = acc;
            } else {
                cplx acc = z(1) / std::sqrt(static_cast<double>(k)) * c(j, k - 1);
                if (k >= 2)
                    acc += s(1, 1) * std::sqrt((k - 1.0) / k) * c(j, k - 2);
                c(j, k) = acc;
            }
        }
    }
    return c;
}

ExpTaylor4::ExpTaylor4(const Eigen::Matrix4cd& r, const std::array<int, 4>& cut) : cut_(cut) {
    for (int i = 0; i < 4; ++i)
        if (cut_[i] < 0) throw NumericalError("ExpTaylor4: negative cutoff");
    const Eigen::Matrix4cd s = 0.5 * (r + r.transpose());
    const std::size_t total = static_cast<std::size_t>(cut_[0] + 1) * (cut_[1] + 1) *
                              (cut_[2] + 1) * (cut_[3] + 1);
    data_.assign(total, cplx(0.0, 0.0));
    data_[0] = 1.0;

    // Lexicographic fill: every referenced index is componentwise smaller,
    // hence already computed.
    std::array<int, 4> k{};
    for (k[0] = 0; k[0] <= cut_[0]; ++k[0]) {
        for (k[1] = 0; k[1] <= cut_[1]; ++k[1]) {
            for (k[2] = 0; k[2] <= cut_[2]; ++k[2]) {
                for (k[3] = 0; k[3] <= cut_[3]; ++k[3]) {
                    if (k[0] == 0 && k[1] == 0 && k[2] == 0 && k[3] == 0) continue;
                    int i = 0;
                    while (k[i] == 0) ++i;
                    cplx acc(0.0, 0.0);
                    std::array<int, 4> km = k;
                    km[i] -= 1;
                    for (int j = 0; j < 4; ++j) {
                        const int kj = km[j];
                        if (kj == 0) continue;
                        km[j] -= 1;
                        acc += s(i, j) * std::sqrt(static_cast<double>(kj) / k[i]) *
                               data_[index(km[0], km[1], km[2], km[3])];
                        km[j] += 1;
                    }
                    data_[index(k[0], k[1], k[2], k[3])] = acc;
                }
            }
        }
    }
}

} // namespace qng::math
