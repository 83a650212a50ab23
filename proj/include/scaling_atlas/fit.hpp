#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "scaling_atlas/nelder_mead.hpp"
#include "scaling_atlas/observations.hpp"
#include "scaling_atlas/rng.hpp"
#include "scaling_atlas/scaling_models.hpp"

namespace scaling_atlas {

/// How to fit: which family, how many random restarts, and the band the
/// restart parameter vectors are drawn from ("small values").
struct FitSpec {
    ModelFamily family = ModelFamily::LogPoly6;
    int restarts = 32;
    double init_low = 0.0;
    double init_high = 0.1;
    std::uint64_t seed = 0;
    OptimOptions optim_options{};
};

struct FitResult {
    ScalingModel model;             ///< best across restarts
    double sse = 0.0;
    double rmse = 0.0;
    std::vector<double> residuals;  ///< prediction - observation, set order
    std::vector<double> restart_losses;
    bool converged = false;
    bool degenerate = false;        ///< fewer observations than parameters
};

/// Unweighted sum of squared errors in percent-accuracy space. Returns
/// +infinity when the model is non-finite anywhere on the set, which is how
/// infeasible parameter vectors are communicated to the optimizer.
inline double sse_loss(const ScalingModel& model, const ObservationSet& set) {
    if (set.empty()) throw EmptySet("sse_loss: empty observation set");
    double sse = 0.0;
    for (const Observation& o : set.observations) {
        const double pred = detail::evaluate_raw(model, to_input_point(o));
        if (!std::isfinite(pred)) return std::numeric_limits<double>::infinity();
        const double r = pred - o.accuracy;
        sse += r * r;
    }
    return sse;
}

namespace detail {

/// One restart: Nelder-Mead from x0, re-run from the incumbent while the
/// loss keeps improving by at least 1% per round. A simplex that collapses
/// early in high dimension is re-inflated by the fresh initial-step offsets,
/// which is what makes the 10-parameter family recoverable at all; the
/// relative-improvement cutoff keeps hopeless starts from crawling through
/// the whole iteration budget.
template <typename F>
OptimResult chained_minimize(F&& objective, std::vector<double> x0, const OptimOptions& options) {
    constexpr int kMaxRounds = 8;
    OptimResult best = minimize(objective, x0, options);
    for (int round = 1; round < kMaxRounds; ++round) {
        OptimResult next = minimize(objective, best.x_min, options);
        next.iterations += best.iterations;
        next.function_evals += best.function_evals;
        const bool kept_improving =
            best.f_min - next.f_min > 0.01 * std::abs(best.f_min) + 1e-300;
        if (next.f_min < best.f_min) best = std::move(next);
        if (!kept_improving) break;
    }
    return best;
}

}  // namespace detail

/// Fits one benchmark-condition slice by running `restarts` independent
/// chained Nelder-Mead minimizations of sse_loss, each started from a
/// parameter vector drawn uniformly from [init_low, init_high) with a stream
/// derived from (seed, restart_index), and keeping the best. The winning
/// restart is then continued with seeded perturbation rounds (kick the
/// incumbent, re-minimize, keep improvements), which reliably escapes the
/// shallow local basins the 10-parameter family is prone to. Ties in loss go
/// to the lowest restart index, so the result is deterministic for a fixed
/// spec.
inline FitResult fit(const ObservationSet& set, const FitSpec& spec) {
    if (set.empty()) throw EmptySet("fit: empty observation set");
    if (!is_single_slice(set))
        throw MixedSlice("fit: observation set spans multiple benchmarks or conditions");
    if (spec.restarts < 1) throw std::invalid_argument("fit: restarts must be >= 1");
    if (!(spec.init_low < spec.init_high))
        throw std::invalid_argument("fit: init_low must be < init_high");

    const int dim = param_count(spec.family);

    // hot path: logs taken once, no per-evaluation allocation
    struct LogPoint {
        double ln_n, ln_d, ln_r, accuracy;
    };
    std::vector<LogPoint> points;
    points.reserve(set.size());
    for (const Observation& o : set.observations)
        points.push_back({std::log(o.hours), std::log(static_cast<double>(o.params)),
                          std::log(static_cast<double>(o.pixels)), o.accuracy});
    const auto objective = [&](std::span<const double> x) {
        double sse = 0.0;
        for (const LogPoint& p : points) {
            const double pred = detail::evaluate_logs(spec.family, x, p.ln_n, p.ln_d, p.ln_r);
            if (!std::isfinite(pred)) return std::numeric_limits<double>::infinity();
            const double r = pred - p.accuracy;
            sse += r * r;
        }
        return sse;
    };

    FitResult result;
    result.restart_losses.reserve(spec.restarts);
    double best_loss = std::numeric_limits<double>::infinity();
    int winner = -1;
    std::vector<double> x0(dim);

    for (int k = 0; k < spec.restarts; ++k) {
        SplitMix64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(k)));
        for (double& v : x0) v = rng.uniform(spec.init_low, spec.init_high);
        OptimResult r;
        try {
            r = detail::chained_minimize(objective, x0, spec.optim_options);
        } catch (const NonFiniteStart&) {
            // a fully infeasible starting simplex is a legal (infinite) restart
            result.restart_losses.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        result.restart_losses.push_back(r.f_min);
        if (r.f_min < best_loss) {
            best_loss = r.f_min;
            result.model = ScalingModel{spec.family, std::move(r.x_min)};
            result.converged = r.converged;
            winner = k;
        }
    }

    if (!std::isfinite(best_loss))
        throw AllRestartsInfeasible("fit: every restart produced an infinite loss");

    // Continue the winning restart with perturbation rounds. Kicks are
    // multiplicative with cycling strength plus a small absolute jitter on
    // the init scale; only improvements are kept.
    {
        SplitMix64 kick_rng(mix_seed(spec.seed, 0x9e3779b9ULL + static_cast<std::uint64_t>(winner)));
        const double kick_scales[4] = {0.35, 0.7, 1.05, 1.4};
        const double jitter = 0.5 * (spec.init_high - spec.init_low);
        std::vector<double> kicked(dim);
        int rounds_since_improvement = 0;
        for (int round = 0; round < 24 && rounds_since_improvement < 12; ++round) {
            const double s = kick_scales[round % 4];
            for (int i = 0; i < dim; ++i)
                kicked[i] = result.model.params[i] * std::exp(kick_rng.uniform(-s, s)) +
                            kick_rng.uniform(-jitter, jitter);
            OptimResult r;
            try {
                r = detail::chained_minimize(objective, kicked, spec.optim_options);
            } catch (const NonFiniteStart&) {
                ++rounds_since_improvement;
                continue;
            }
            if (r.f_min < best_loss - 1e-12 * (1.0 + std::abs(best_loss))) {
                best_loss = r.f_min;
                result.model.params = std::move(r.x_min);
                result.converged = r.converged;
                rounds_since_improvement = 0;
            } else {
                ++rounds_since_improvement;
            }
        }
        result.restart_losses[winner] = best_loss;
    }

    result.residuals.reserve(set.size());
    for (const Observation& o : set.observations)
        result.residuals.push_back(detail::evaluate_raw(result.model, to_input_point(o)) -
                                   o.accuracy);
    double sse = 0.0;
    for (double r : result.residuals) sse += r * r;
    result.sse = sse;
    result.rmse = std::sqrt(sse / static_cast<double>(set.size()));
    result.degenerate = set.size() < static_cast<std::size_t>(dim);
    return result;
}

inline double predict(const FitResult& fit_result, const InputPoint& point) {
    return evaluate(fit_result.model, point);
}

/// Recipe for a synthetic observation grid: the cross product of the three
/// axis grids, optionally with the paper's repeat structure (every data size
/// except the largest is resampled `repeats` times).
struct SyntheticSpec {
    ScalingModel true_model;
    std::vector<double> hours_grid;
    std::vector<double> params_grid;
    std::vector<double> pixels_grid;  ///< perfect squares
    int repeats = 1;
    double noise_sd = 0.0;            ///< percent-accuracy units
    std::uint64_t seed = 0;
    bool paper_design = false;        ///< single repeat for the largest hours value
    Benchmark benchmark = Benchmark::ImageNetTop5;
    FinetuneCondition condition = FinetuneCondition::Permissive;
};

/// Generates one observation per (hours, params, pixels, repeat) tuple with
/// accuracy = truth + gaussian noise, clamped into [0, 100] only when noise
/// pushes it out. The truth itself must land in [0, 100] on every grid
/// point. Deterministic for a fixed spec.
inline ObservationSet generate_synthetic(const SyntheticSpec& spec) {
    validate_model(spec.true_model);
    if (spec.hours_grid.empty() || spec.params_grid.empty() || spec.pixels_grid.empty())
        throw std::invalid_argument("generate_synthetic: grids must be non-empty");
    for (const auto* grid : {&spec.hours_grid, &spec.params_grid, &spec.pixels_grid}) {
        for (double v : *grid) {
            if (!(v > 1.0) || !std::isfinite(v))
                throw std::invalid_argument("generate_synthetic: grid values must be > 1");
        }
    }
    if (spec.repeats < 1) throw std::invalid_argument("generate_synthetic: repeats must be >= 1");
    if (!(spec.noise_sd >= 0.0))
        throw std::invalid_argument("generate_synthetic: noise_sd must be >= 0");

    const double max_hours = *std::max_element(spec.hours_grid.begin(), spec.hours_grid.end());
    SplitMix64 noise(mix_seed(spec.seed, 0));

    ObservationSet set;
    set.source_label = "synthetic";
    for (double hours : spec.hours_grid) {
        const int repeats = spec.paper_design && hours == max_hours ? 1 : spec.repeats;
        for (double params : spec.params_grid) {
            for (double pixels : spec.pixels_grid) {
                const long long px = std::llround(pixels);
                const long long side = exact_square_side(px);
                if (side == 0)
                    throw std::invalid_argument(
                        "generate_synthetic: pixels grid values must be perfect squares");
                const InputPoint point{hours, params, static_cast<double>(px)};
                double truth = detail::evaluate_raw(spec.true_model, point);
                if (!std::isfinite(truth))
                    throw NonFiniteTruth("generate_synthetic: true model is non-finite at hours=" +
                                         detail::format_double(hours));
                if (truth < 0.0 || truth > 100.0)
                    throw std::invalid_argument(
                        "generate_synthetic: true model leaves [0, 100] on the grid");
                for (int rep = 0; rep < repeats; ++rep) {
                    Observation o;
                    o.hours = hours;
                    o.params = std::llround(params);
                    o.pixels = px;
                    o.accuracy = spec.noise_sd > 0.0
                                     ? std::clamp(noise.gaussian(truth, spec.noise_sd), 0.0, 100.0)
                                     : truth;
                    o.benchmark = spec.benchmark;
                    o.condition = spec.condition;
                    o.repeat = rep;
                    o.arch_label = "d" + std::to_string(o.params) + "_r" + std::to_string(side);
                    set.observations.push_back(std::move(o));
                }
            }
        }
    }
    return set;
}

}  // namespace scaling_atlas
