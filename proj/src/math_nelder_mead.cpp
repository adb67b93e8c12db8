// math_nelder_mead.cpp -- downhill-simplex minimizer.

#include "qng/math/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace qng::math {

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, double scale, double ftol, double xtol,
                          int max_iter) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> val(n + 1);
    for (int i = 0; i < n; ++i) pts[i + 1](i) += scale;
    for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

    SimplexResult res;
    int iter = 0;
    std::vector<int> order(n + 1);
    for (; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
        const int best = order[0], worst = order[n], second = order[n - 1];

        double diam = 0.0;
        for (int i = 1; i <= n; ++i)
            diam = std::max(diam, (pts[order[i]] - pts[best]).norm());
        if (diam < xtol && std::abs(val[worst] - val[best]) < ftol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= n;

        const Eigen::VectorXd refl = centroid + (centroid - pts[worst]);
        const double frefl = f(refl);
        if (frefl < val[order[0]]) {
            const Eigen::VectorXd expa = centroid + 2.0 * (centroid - pts[worst]);
            const double fexpa = f(expa);
            if (fexpa < frefl) {
                pts[worst] = expa;
                val[worst] = fexpa;
            } else {
                pts[worst] = refl;
                val[worst] = frefl;
            }
        } else if (frefl < val[second]) {
            pts[worst] = refl;
            val[worst] = frefl;
        } else {
            const Eigen::VectorXd contr =
                (frefl < val[worst]) ? Eigen::VectorXd(centroid + 0.5 * (refl - centroid))
                                     : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
            const double fcontr = f(contr);
            if (fcontr < std::min(frefl, val[worst])) {
                pts[worst] = contr;
                val[worst] = fcontr;
            } else {
                // Shrink toward the best vertex.
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }

    const int best =
        static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
    res.x = pts[best];
    res.value = val[best];
    res.iterations = iter;
    return res;
}

} // namespace qng::math
