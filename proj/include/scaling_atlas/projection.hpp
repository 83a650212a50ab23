#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "scaling_atlas/fit.hpp"
#include "scaling_atlas/observations.hpp"

namespace scaling_atlas {

/// Calendar hours per year (24 h/day). The waking-hours convention would be
/// inconsistent with the scenario tables this reproduces.
inline constexpr double kHoursPerYear = 8760.0;

inline double hours_to_years(double hours) { return hours / kHoursPerYear; }
inline double years_to_hours(double years) { return years * kHoursPerYear; }

/// The anchor configuration scenarios scale from. Stored unrounded; display
/// rounding never feeds back into arithmetic.
struct ReferencePoint {
    double hours = 4971.0;
    long long params = 633'000'000;
    int pixel_side = 476;
    int patch = 14;
};

struct ExplicitValues {
    double hours = 0.0;
    double params = 0.0;
    int pixel_side = 0;
};

/// Either a uniform multiplier on (hours, params, pixel count) or explicit
/// values; exactly one is active.
struct Scenario {
    std::string name;
    std::optional<double> multiplier;
    std::optional<ExplicitValues> explicit_values;
};

inline Scenario multiplier_scenario(std::string name, double m) {
    return Scenario{std::move(name), m, std::nullopt};
}

struct ScaledPoint {
    double hours = 0.0;
    double params = 0.0;
    int pixel_side = 0;
};

/// Scales the reference by m: hours and params linearly, the pixel COUNT by
/// m (so the side by sqrt(m)), then snaps the side to the nearest multiple
/// of the patch size, ties rounding up. Nearest-multiple snapping (not plain
/// rounding) is what keeps every projected resolution on the patch grid.
inline ScaledPoint apply_multiplier(const ReferencePoint& ref, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("apply_multiplier: multiplier must be positive");
    const double raw_side = static_cast<double>(ref.pixel_side) * std::sqrt(m);
    const double patch = static_cast<double>(ref.patch);
    long long k = static_cast<long long>(std::floor(raw_side / patch));
    const double down = raw_side - patch * static_cast<double>(k);
    const double up = patch * static_cast<double>(k + 1) - raw_side;
    long long side = up <= down ? (k + 1) * ref.patch : k * ref.patch;
    if (side < ref.patch) side = ref.patch;  // keep the side a positive multiple
    return {ref.hours * m, static_cast<double>(ref.params) * m, static_cast<int>(side)};
}

/// One projected row: the scaled configuration plus the model's predicted
/// accuracy and whether it clears the benchmark's human threshold.
struct Projection {
    Scenario scenario;
    double hours = 0.0;
    double years = 0.0;
    double params = 0.0;
    int pixel_side = 0;
    long long pixels = 0;
    double projected_accuracy = 0.0;
    bool threshold_reached = false;
};

inline ScaledPoint resolve_scenario(const ReferencePoint& ref, const Scenario& scenario) {
    if (scenario.multiplier.has_value() == scenario.explicit_values.has_value())
        throw std::invalid_argument("scenario '" + scenario.name +
                                    "': exactly one of multiplier/explicit values must be set");
    if (scenario.multiplier) return apply_multiplier(ref, *scenario.multiplier);
    const ExplicitValues& v = *scenario.explicit_values;
    if (!(v.hours > 0.0) || !(v.params > 0.0) || v.pixel_side <= 0)
        throw std::invalid_argument("scenario '" + scenario.name + "': values must be positive");
    return {v.hours, v.params, v.pixel_side};
}

inline Projection project(const FitResult& fit_result, const ReferencePoint& ref,
                          const Scenario& scenario, Benchmark benchmark) {
    const ScaledPoint p = resolve_scenario(ref, scenario);
    const long long pixels = static_cast<long long>(p.pixel_side) * p.pixel_side;
    Projection out;
    out.scenario = scenario;
    out.hours = p.hours;
    out.years = hours_to_years(p.hours);
    out.params = p.params;
    out.pixel_side = p.pixel_side;
    out.pixels = pixels;
    out.projected_accuracy =
        predict(fit_result, InputPoint{p.hours, p.params, static_cast<double>(pixels)});
    out.threshold_reached = out.projected_accuracy >= human_threshold(benchmark);
    return out;
}

struct ThresholdCrossing {
    double multiplier = 1.0;
    /// False when the projection was not monotone over the scan, in which
    /// case `multiplier` is the first scanned crossing (low confidence).
    bool monotone = true;
};

/// Smallest multiplier m in [1, m_max] whose projection reaches the
/// benchmark's human threshold, found by bisection after a 64-point scan
/// verifies the bracket actually crosses and the projection is monotone.
/// Returns nullopt when the threshold is out of reach below m_max.
inline std::optional<ThresholdCrossing> solve_threshold(const FitResult& fit_result,
                                                        const ReferencePoint& ref,
                                                        Benchmark benchmark, double m_max) {
    if (!(m_max > 1.0)) throw std::invalid_argument("solve_threshold: m_max must be > 1");
    const double threshold = human_threshold(benchmark);
    const auto accuracy_at = [&](double m) {
        const ScaledPoint p = apply_multiplier(ref, m);
        const double pixels = static_cast<double>(p.pixel_side) * p.pixel_side;
        return predict(fit_result, InputPoint{p.hours, p.params, pixels});
    };

    if (accuracy_at(1.0) >= threshold) return ThresholdCrossing{1.0, true};

    constexpr int kScanPoints = 64;
    double scan_acc[kScanPoints];
    bool monotone = true;
    int first_crossing = -1;
    for (int i = 0; i < kScanPoints; ++i) {
        const double m = 1.0 + (m_max - 1.0) * static_cast<double>(i) / (kScanPoints - 1);
        scan_acc[i] = accuracy_at(m);
        if (i > 0 && scan_acc[i] < scan_acc[i - 1] - 1e-9) monotone = false;
        if (first_crossing < 0 && scan_acc[i] >= threshold) first_crossing = i;
    }

    if (!monotone) {
        if (first_crossing < 0) return std::nullopt;
        const double m =
            1.0 + (m_max - 1.0) * static_cast<double>(first_crossing) / (kScanPoints - 1);
        return ThresholdCrossing{m, false};
    }
    if (scan_acc[kScanPoints - 1] < threshold) return std::nullopt;

    double lo = 1.0 + (m_max - 1.0) * static_cast<double>(first_crossing - 1) / (kScanPoints - 1);
    double hi = 1.0 + (m_max - 1.0) * static_cast<double>(first_crossing) / (kScanPoints - 1);
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        (accuracy_at(mid) >= threshold ? hi : lo) = mid;
    }
    return ThresholdCrossing{hi, true};
}

}  // namespace scaling_atlas
