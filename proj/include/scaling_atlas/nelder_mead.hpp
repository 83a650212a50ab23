#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "scaling_atlas/errors.hpp"

namespace scaling_atlas {

struct OptimOptions {
    int max_iterations = 20000;
    double x_tolerance = 1e-8;   ///< max per-coordinate spread of the simplex
    double f_tolerance = 1e-8;   ///< max objective spread over the simplex
    double initial_step = 0.05;  ///< per-coordinate seeding offset (relative when x0_i != 0)
};

/// Reflection/expansion/contraction/shrink coefficients of the simplex loop.
struct SimplexCoefficients {
    double reflection;
    double expansion;
    double contraction;
    double shrink;
};

/// Dimension-adaptive coefficients: (1, 1 + 2/n, 0.75 - 1/(2n), 1 - 1/n).
/// At dim 2 these coincide with the classical (1, 2, 0.5, 0.5); below that
/// the shrink/contraction formulas degenerate, so dim <= 2 returns the
/// classical values.
inline SimplexCoefficients adaptive_coefficients(int dim) {
    if (dim < 1) throw std::invalid_argument("adaptive_coefficients: dim must be >= 1");
    if (dim <= 2) return {1.0, 2.0, 0.5, 0.5};
    const double n = static_cast<double>(dim);
    return {1.0, 1.0 + 2.0 / n, 0.75 - 1.0 / (2.0 * n), 1.0 - 1.0 / n};
}

enum class Termination { Tolerance, MaxIterations };

struct OptimResult {
    std::vector<double> x_min;
    double f_min = std::numeric_limits<double>::infinity();
    int iterations = 0;
    int function_evals = 0;
    bool converged = false;
    Termination termination = Termination::MaxIterations;
};

namespace detail {

/// NaN objective values are treated as infeasible, same as +infinity, so the
/// simplex retreats instead of propagating NaN through comparisons.
inline double sanitize(double f) {
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
}

}  // namespace detail

/// Minimizes `objective` with the Nelder-Mead simplex method using
/// dimension-adaptive coefficients. The objective may return +infinity to
/// mark infeasible regions. `observer(iteration, best_f)` is called once per
/// iteration after the simplex update.
///
/// The initial simplex is x0 plus one vertex per coordinate, offset by
/// initial_step * |x0_i| (or initial_step when x0_i == 0). Terminates when
/// both the coordinate spread and the objective spread fall below their
/// tolerances, or at max_iterations. Fully deterministic.
template <typename F, typename Observer>
OptimResult minimize_observed(F&& objective, std::span<const double> x0,
                              const OptimOptions& options, Observer&& observer) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw std::invalid_argument("minimize: x0 must be non-empty");
    if (options.max_iterations <= 0 || options.x_tolerance <= 0.0 ||
        options.f_tolerance <= 0.0 || options.initial_step <= 0.0)
        throw std::invalid_argument("minimize: options must be positive");
    for (double v : x0) {
        if (!std::isfinite(v)) throw std::invalid_argument("minimize: x0 must be finite");
    }

    const SimplexCoefficients c = adaptive_coefficients(static_cast<int>(dim));
    const double inf = std::numeric_limits<double>::infinity();

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return detail::sanitize(objective(std::span<const double>(x)));
    };

    // vertices[0] is x0 itself; vertex i+1 offsets coordinate i.
    std::vector<std::vector<double>> vertices(dim + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < dim; ++i) {
        double& xi = vertices[i + 1][i];
        xi += xi != 0.0 ? options.initial_step * std::abs(xi) : options.initial_step;
    }

    std::vector<double> f(dim + 1);
    {
        ++evals;
        const double f0 = objective(std::span<const double>(vertices[0]));
        if (std::isnan(f0)) throw NonFiniteStart("objective is NaN at x0");
        f[0] = f0;
    }
    for (std::size_t i = 1; i <= dim; ++i) f[i] = eval(vertices[i]);
    if (f[0] == inf && *std::min_element(f.begin(), f.end()) == inf)
        throw NonFiniteStart("objective is infeasible on the entire initial simplex");

    // order[] holds vertex indices sorted by objective value, best first.
    std::vector<std::size_t> order(dim + 1);
    auto sort_order = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    };

    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
    int iter = 0;
    bool converged = false;

    for (; iter < options.max_iterations; ++iter) {
        sort_order();
        const std::size_t best = order[0];
        const std::size_t worst = order[dim];
        const std::size_t second_worst = order[dim - 1];

        double f_spread = f[worst] - f[best];
        double x_spread = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double lo = vertices[0][i], hi = vertices[0][i];
            for (std::size_t j = 1; j <= dim; ++j) {
                lo = std::min(lo, vertices[j][i]);
                hi = std::max(hi, vertices[j][i]);
            }
            x_spread = std::max(x_spread, hi - lo);
        }
        if (x_spread <= options.x_tolerance && f_spread <= options.f_tolerance) {
            converged = true;
            break;
        }

        // centroid of all vertices except the worst
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t j = 0; j <= dim; ++j) {
            if (j == worst) continue;
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += vertices[j][i];
        }
        for (double& v : centroid) v /= static_cast<double>(dim);

        for (std::size_t i = 0; i < dim; ++i)
            xr[i] = centroid[i] + c.reflection * (centroid[i] - vertices[worst][i]);
        const double fr = eval(xr);

        if (fr < f[best]) {
            for (std::size_t i = 0; i < dim; ++i)
                xe[i] = centroid[i] + c.expansion * (xr[i] - centroid[i]);
            const double fe = eval(xe);
            if (fe < fr) {
                vertices[worst] = xe;
                f[worst] = fe;
            } else {
                vertices[worst] = xr;
                f[worst] = fr;
            }
        } else if (fr < f[second_worst]) {
            vertices[worst] = xr;
            f[worst] = fr;
        } else {
            bool shrink = false;
            if (fr < f[worst]) {
                // outside contraction
                for (std::size_t i = 0; i < dim; ++i)
                    xc[i] = centroid[i] + c.contraction * (xr[i] - centroid[i]);
                const double fc = eval(xc);
                if (fc <= fr) {
                    vertices[worst] = xc;
                    f[worst] = fc;
                } else {
                    shrink = true;
                }
            } else {
                // inside contraction
                for (std::size_t i = 0; i < dim; ++i)
                    xc[i] = centroid[i] - c.contraction * (centroid[i] - vertices[worst][i]);
                const double fc = eval(xc);
                if (fc < f[worst]) {
                    vertices[worst] = xc;
                    f[worst] = fc;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                for (std::size_t j = 0; j <= dim; ++j) {
                    if (j == best) continue;
                    for (std::size_t i = 0; i < dim; ++i)
                        vertices[j][i] =
                            vertices[best][i] + c.shrink * (vertices[j][i] - vertices[best][i]);
                    f[j] = eval(vertices[j]);
                }
            }
        }

        observer(iter, *std::min_element(f.begin(), f.end()));
    }

    sort_order();
    OptimResult result;
    result.x_min = vertices[order[0]];
    result.f_min = f[order[0]];
    result.iterations = iter;
    result.function_evals = evals;
    result.converged = converged;
    result.termination = converged ? Termination::Tolerance : Termination::MaxIterations;
    return result;
}

template <typename F>
OptimResult minimize(F&& objective, std::span<const double> x0, const OptimOptions& options = {}) {
    return minimize_observed(std::forward<F>(objective), x0, options, [](int, double) {});
}

}  // namespace scaling_atlas
