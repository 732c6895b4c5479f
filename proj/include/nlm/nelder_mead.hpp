#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <functional>
#include <vector>

namespace nlm {

struct NelderMeadOptions {
    int max_evals = 10000;
    double x_tol = 1e-9;  // stop when the simplex diameter falls below this
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evals = 0;
};

/// Downhill simplex minimization with the standard coefficients
/// (reflect 1, expand 2, contract 1/2, shrink 1/2).
template <typename F>
NelderMeadResult nelder_mead_minimize(F&& f, const Eigen::VectorXd& x0, double initial_step,
                                      const NelderMeadOptions& options = {}) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> pts(static_cast<size_t>(n) + 1, x0);
    std::vector<double> vals(static_cast<size_t>(n) + 1);
    int evals = 0;
    for (int k = 1; k <= n; ++k) pts[static_cast<size_t>(k)][k - 1] += initial_step;
    for (int k = 0; k <= n; ++k) {
        vals[static_cast<size_t>(k)] = f(pts[static_cast<size_t>(k)]);
        ++evals;
    }

    std::vector<int> order(static_cast<size_t>(n) + 1);
    auto sort_order = [&] {
        for (int k = 0; k <= n; ++k) order[static_cast<size_t>(k)] = k;
        std::sort(order.begin(), order.end(), [&vals](int a, int b) {
            return vals[static_cast<size_t>(a)] < vals[static_cast<size_t>(b)];
        });
    };

    while (evals < options.max_evals) {
        sort_order();
        const int best = order[0], worst = order[static_cast<size_t>(n)],
                  second_worst = order[static_cast<size_t>(n) - 1];

        double diameter = 0.0;
        for (int k = 1; k <= n; ++k)
            diameter = std::max(diameter, (pts[static_cast<size_t>(order[static_cast<size_t>(k)])] -
                                           pts[static_cast<size_t>(best)])
                                              .template lpNorm<Eigen::Infinity>());
        if (diameter < options.x_tol) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int k = 0; k <= n; ++k)
            if (k != worst) centroid += pts[static_cast<size_t>(k)];
        centroid /= n;

        Eigen::VectorXd reflected = centroid + (centroid - pts[static_cast<size_t>(worst)]);
        double f_reflected = f(reflected);
        ++evals;

        if (f_reflected < vals[static_cast<size_t>(best)]) {
            Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[static_cast<size_t>(worst)]);
            double f_expanded = f(expanded);
            ++evals;
            if (f_expanded < f_reflected) {
                pts[static_cast<size_t>(worst)] = expanded;
                vals[static_cast<size_t>(worst)] = f_expanded;
            } else {
                pts[static_cast<size_t>(worst)] = reflected;
                vals[static_cast<size_t>(worst)] = f_reflected;
            }
        } else if (f_reflected < vals[static_cast<size_t>(second_worst)]) {
            pts[static_cast<size_t>(worst)] = reflected;
            vals[static_cast<size_t>(worst)] = f_reflected;
        } else {
            bool outside = f_reflected < vals[static_cast<size_t>(worst)];
            Eigen::VectorXd contracted =
                outside ? centroid + 0.5 * (reflected - centroid)
                        : centroid + 0.5 * (pts[static_cast<size_t>(worst)] - centroid);
            double f_contracted = f(contracted);
            ++evals;
            if (f_contracted < std::min(f_reflected, vals[static_cast<size_t>(worst)])) {
                pts[static_cast<size_t>(worst)] = contracted;
                vals[static_cast<size_t>(worst)] = f_contracted;
            } else {
                for (int k = 0; k <= n; ++k) {
                    if (k == best) continue;
                    pts[static_cast<size_t>(k)] =
                        pts[static_cast<size_t>(best)] +
                        0.5 * (pts[static_cast<size_t>(k)] - pts[static_cast<size_t>(best)]);
                    vals[static_cast<size_t>(k)] = f(pts[static_cast<size_t>(k)]);
                    ++evals;
                }
            }
        }
    }

    sort_order();
    NelderMeadResult res;
    res.x = pts[static_cast<size_t>(order[0])];
    res.value = vals[static_cast<size_t>(order[0])];
    res.evals = evals;
    return res;
}

}  // namespace nlm
