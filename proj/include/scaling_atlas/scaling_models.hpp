#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "scaling_atlas/errors.hpp"
#include "scaling_atlas/observations.hpp"

namespace scaling_atlas {

/// The three parametric scaling families. All of them work on the natural
/// logarithms of the inputs; by the log-base invariance property (see tests)
/// this convention affects parameter values but not the set of achievable
/// fits.
enum class ModelFamily { LogPoly6, PowerProduct10, InteractionPoly8 };

inline constexpr int param_count(ModelFamily f) {
    switch (f) {
        case ModelFamily::LogPoly6: return 6;
        case ModelFamily::PowerProduct10: return 10;
        case ModelFamily::InteractionPoly8: return 8;
    }
    return 0;
}

inline constexpr std::string_view family_name(ModelFamily f) {
    switch (f) {
        case ModelFamily::LogPoly6: return "log_poly6";
        case ModelFamily::PowerProduct10: return "power_product10";
        case ModelFamily::InteractionPoly8: return "interaction_poly8";
    }
    return "";
}

inline std::optional<ModelFamily> parse_family(std::string_view s) {
    if (s == "log_poly6") return ModelFamily::LogPoly6;
    if (s == "power_product10") return ModelFamily::PowerProduct10;
    if (s == "interaction_poly8") return ModelFamily::InteractionPoly8;
    return std::nullopt;
}

/// Parameter symbol names in vector order.
inline std::span<const std::string_view> param_names(ModelFamily f) {
    static constexpr std::array<std::string_view, 6> log_poly6 = {
        "alpha_n", "beta_n", "alpha_d", "beta_d", "alpha_r", "beta_r"};
    static constexpr std::array<std::string_view, 10> power_product10 = {
        "alpha_n", "beta_n", "gamma_n", "alpha_d", "beta_d",
        "gamma_d", "alpha_r", "beta_r",  "gamma_r", "delta"};
    static constexpr std::array<std::string_view, 8> interaction_poly8 = {
        "alpha_n", "alpha_d", "alpha_r", "alpha_nd", "alpha_nr", "alpha_dr", "alpha_ndr", "gamma"};
    switch (f) {
        case ModelFamily::LogPoly6: return log_poly6;
        case ModelFamily::PowerProduct10: return power_product10;
        case ModelFamily::InteractionPoly8: return interaction_poly8;
    }
    return {};
}

/// A family tag plus its parameter vector, in param_names order.
struct ScalingModel {
    ModelFamily family = ModelFamily::LogPoly6;
    std::vector<double> params;

    bool operator==(const ScalingModel&) const = default;
};

inline void validate_model(const ScalingModel& m) {
    if (static_cast<int>(m.params.size()) != param_count(m.family))
        throw std::invalid_argument("scaling model: expected " +
                                    std::to_string(param_count(m.family)) + " parameters, got " +
                                    std::to_string(m.params.size()));
    for (double p : m.params) {
        if (!std::isfinite(p)) throw std::invalid_argument("scaling model: non-finite parameter");
    }
}

/// A point in raw (not log) input space: n hours of video, d parameters,
/// r pixels. Logarithms are taken internally. Values in (0, 1] are legal but
/// give non-positive logs; callers that care can check in_log_domain().
struct InputPoint {
    double n = 1.0;  ///< pretraining hours
    double d = 1.0;  ///< parameter count
    double r = 1.0;  ///< pixel count

    bool in_log_domain() const { return n > 1.0 && d > 1.0 && r > 1.0; }
};

inline InputPoint to_input_point(const Observation& o) {
    return {o.hours, static_cast<double>(o.params), static_cast<double>(o.pixels)};
}

namespace detail {

/// Family formulas over pre-taken logarithms; no finiteness checks, may
/// return NaN or infinity. The fitter maps non-finite values to an infinite
/// loss instead of raising.
inline double evaluate_logs(ModelFamily family, std::span<const double> a, double ln_n,
                            double ln_d, double ln_r) {
    switch (family) {
        case ModelFamily::LogPoly6:
            return (a[0] * ln_n + a[1]) * (a[2] * ln_d + a[3]) * (a[4] * ln_r + a[5]);
        case ModelFamily::PowerProduct10:
            return (a[0] * std::pow(ln_n, a[1]) + a[2]) * (a[3] * std::pow(ln_d, a[4]) + a[5]) *
                       (a[6] * std::pow(ln_r, a[7]) + a[8]) +
                   a[9];
        case ModelFamily::InteractionPoly8:
            return a[0] * ln_n + a[1] * ln_d + a[2] * ln_r + a[3] * ln_n * ln_d +
                   a[4] * ln_n * ln_r + a[5] * ln_d * ln_r + a[6] * ln_n * ln_d * ln_r + a[7];
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline double evaluate_raw(const ScalingModel& m, const InputPoint& p) {
    return evaluate_logs(m.family, m.params, std::log(p.n), std::log(p.d), std::log(p.r));
}

}  // namespace detail

/// Predicted accuracy in percent at the given point. The result is not
/// clamped to [0, 100]: projections legitimately probe where the fitted
/// curve crosses thresholds and clamping would corrupt that. Throws
/// NonFiniteResult when an intermediate is NaN or infinite (e.g. the
/// power-product family at log values <= 0 with a fractional exponent).
inline double evaluate(const ScalingModel& model, const InputPoint& point) {
    validate_model(model);
    if (!(point.n > 0.0) || !(point.d > 0.0) || !(point.r > 0.0))
        throw std::invalid_argument("input point: n, d, r must be positive");
    double v = detail::evaluate_raw(model, point);
    if (!std::isfinite(v))
        throw NonFiniteResult("evaluation produced a non-finite value for family " +
                              std::string(family_name(model.family)));
    return v;
}

/// Predictions for every observation, in set order.
inline std::vector<double> evaluate_batch(const ScalingModel& model, const ObservationSet& set) {
    validate_model(model);
    std::vector<double> out;
    out.reserve(set.size());
    for (std::size_t i = 0; i < set.observations.size(); ++i) {
        double v = detail::evaluate_raw(model, to_input_point(set.observations[i]));
        if (!std::isfinite(v))
            throw NonFiniteResult("evaluation produced a non-finite value", i);
        out.push_back(v);
    }
    return out;
}

}  // namespace scaling_atlas
