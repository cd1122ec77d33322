#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <vector>

namespace hourcast::detail {

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimizer (standard reflection/expansion/
/// contraction/shrink coefficients). Deterministic given the start point.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& start, int max_evals,
                                    double xtol = 1e-8, double ftol = 1e-10,
                                    double initial_step = 0.1) {
    const int n = static_cast<int>(start.size());
    NelderMeadResult res;

    std::vector<Eigen::VectorXd> xs;
    std::vector<double> fs;
    xs.reserve(n + 1);
    xs.push_back(start);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd x = start;
        x[i] += (x[i] != 0.0) ? initial_step * std::abs(x[i]) : initial_step;
        xs.push_back(std::move(x));
    }
    for (const auto& x : xs) fs.push_back(f(x));
    res.evaluations = n + 1;

    std::vector<int> order(xs.size());
    auto sort_simplex = [&] {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    };

    while (res.evaluations < max_evals) {
        sort_simplex();
        const int best = order.front();
        const int worst = order.back();
        const int second_worst = order[order.size() - 2];

        if (std::abs(fs[worst] - fs[best]) <= ftol * (std::abs(fs[best]) + ftol)) {
            double spread = 0.0;
            for (const auto& x : xs) spread = std::max(spread, (x - xs[best]).norm());
            if (spread <= xtol * (1.0 + xs[best].norm())) {
                res.converged = true;
                break;
            }
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int idx : order)
            if (idx != worst) centroid += xs[idx];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
        const double f_reflected = f(reflected);
        ++res.evaluations;

        if (f_reflected < fs[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
            const double f_expanded = f(expanded);
            ++res.evaluations;
            if (f_expanded < f_reflected) {
                xs[worst] = expanded;
                fs[worst] = f_expanded;
            } else {
                xs[worst] = reflected;
                fs[worst] = f_reflected;
            }
        } else if (f_reflected < fs[second_worst]) {
            xs[worst] = reflected;
            fs[worst] = f_reflected;
        } else {
            const Eigen::VectorXd contracted = centroid + 0.5 * (xs[worst] - centroid);
            const double f_contracted = f(contracted);
            ++res.evaluations;
            if (f_contracted < fs[worst]) {
                xs[worst] = contracted;
                fs[worst] = f_contracted;
            } else {
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (static_cast<int>(i) == best) continue;
                    xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
                    fs[i] = f(xs[i]);
                    ++res.evaluations;
                }
            }
        }
    }

    sort_simplex();
    res.x = xs[order.front()];
    res.value = fs[order.front()];
    return res;
}

}  // namespace hourcast::detail
