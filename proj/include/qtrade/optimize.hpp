#pragma once
// Derivative-free optimizers: Nelder-Mead simplex descent and golden-section
// line search. Both are deterministic given their inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace qtrade {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

// Minimizes f over R^n starting from x0 with an axis-aligned initial simplex
// of the given step. Stops when the simplex function spread falls below
// ftol (absolute) or the evaluation budget runs out.
template <typename F>
NelderMeadResult nelder_mead(F&& f, const std::vector<double>& x0, double step, double ftol,
                             std::size_t max_evals) {
    const std::size_t n = x0.size();
    if (n == 0) throw OutOfRangeError("nelder_mead: empty start point");

    NelderMeadResult result;
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) {
        vals[i] = f(pts[i]);
        ++result.evals;
    }

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            p2[i] = pts[idx[i]];
            v2[i] = vals[idx[i]];
        }
        pts.swap(p2);
        vals.swap(v2);
    };

    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    while (result.evals < max_evals) {
        order();
        if (std::abs(vals[n] - vals[0]) <= ftol) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);

        auto blend = [&](double coeff) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coeff * (centroid[j] - pts[n][j]);
            return p;
        };

        const std::vector<double> reflected = blend(kReflect);
        const double fr = f(reflected);
        ++result.evals;

        if (fr < vals[0]) {
            const std::vector<double> expanded = blend(kExpand);
            const double fe = f(expanded);
            ++result.evals;
            if (fe < fr) {
                pts[n] = expanded;
                vals[n] = fe;
            } else {
                pts[n] = reflected;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = reflected;
            vals[n] = fr;
        } else {
            const bool outside = fr < vals[n];
            std::vector<double> contracted(n);
            for (std::size_t j = 0; j < n; ++j) {
                const double target = outside ? reflected[j] : pts[n][j];
                contracted[j] = centroid[j] + kContract * (target - centroid[j]);
            }
            const double fc = f(contracted);
            ++result.evals;
            if (fc < (outside ? fr : vals[n])) {
                pts[n] = contracted;
                vals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + kShrink * (pts[i][j] - pts[0][j]);
                    vals[i] = f(pts[i]);
                    ++result.evals;
                }
            }
        }
    }

    order();
    result.x = pts[0];
    result.value = vals[0];
    return result;
}

struct LineSearchResult {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section maximization of a unimodal function on [lo, hi].
template <typename F>
LineSearchResult golden_max(F&& f, double lo, double hi, double xtol = 1e-12,
                            std::size_t max_iters = 400) {
    if (!(lo <= hi)) throw OutOfRangeError("golden_max: empty interval");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (std::size_t i = 0; i < max_iters && (b - a) > xtol; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    LineSearchResult out;
    out.x = 0.5 * (a + b);
    out.value = f(out.x);
    return out;
}

}  // namespace qtrade
