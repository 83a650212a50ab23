#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "scaling_atlas/detail/text.hpp"
#include "scaling_atlas/errors.hpp"
#include "scaling_atlas/fit.hpp"
#include "scaling_atlas/projection.hpp"
#include "scaling_atlas/scaling_models.hpp"

namespace scaling_atlas {

// ScalingModel <-> {"family": "...", "params": [...]}

inline nlohmann::json model_to_json(const ScalingModel& model) {
    validate_model(model);
    return {{"family", family_name(model.family)}, {"params", model.params}};
}

inline ScalingModel model_from_json(const nlohmann::json& j) {
    auto family = parse_family(j.at("family").get<std::string>());
    if (!family) throw Error("unknown model family '" + j.at("family").get<std::string>() + "'");
    ScalingModel m{*family, j.at("params").get<std::vector<double>>()};
    validate_model(m);
    return m;
}

// FitResult <-> {"family", "params", "sse", "rmse", "converged", "restart_losses"}
// Residuals are not serialized; a deserialized result carries none.

inline nlohmann::json fit_result_to_json(const FitResult& fit) {
    nlohmann::json j = model_to_json(fit.model);
    j["sse"] = fit.sse;
    j["rmse"] = fit.rmse;
    j["converged"] = fit.converged;
    j["restart_losses"] = fit.restart_losses;
    return j;
}

inline FitResult fit_result_from_json(const nlohmann::json& j) {
    FitResult fit;
    fit.model = model_from_json(j);
    fit.sse = j.value("sse", 0.0);
    fit.rmse = j.value("rmse", 0.0);
    fit.converged = j.value("converged", false);
    if (j.contains("restart_losses"))
        fit.restart_losses = j.at("restart_losses").get<std::vector<double>>();
    return fit;
}

// Scenario files: a JSON array whose elements are either
//   {"name": str, "multiplier": num}  or
//   {"name": str, "hours": num, "params": num, "pixel_side": int}

inline std::vector<Scenario> scenarios_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error("scenario file: expected a JSON array");
    std::vector<Scenario> out;
    for (const auto& item : j) {
        Scenario s;
        s.name = item.at("name").get<std::string>();
        if (item.contains("multiplier")) {
            s.multiplier = item.at("multiplier").get<double>();
            if (!(*s.multiplier > 0.0))
                throw Error("scenario '" + s.name + "': multiplier must be positive");
        } else {
            ExplicitValues v;
            v.hours = item.at("hours").get<double>();
            v.params = item.at("params").get<double>();
            v.pixel_side = item.at("pixel_side").get<int>();
            s.explicit_values = v;
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline nlohmann::json scenarios_to_json(const std::vector<Scenario>& scenarios) {
    nlohmann::json j = nlohmann::json::array();
    for (const Scenario& s : scenarios) {
        nlohmann::json item{{"name", s.name}};
        if (s.multiplier) {
            item["multiplier"] = *s.multiplier;
        } else if (s.explicit_values) {
            item["hours"] = s.explicit_values->hours;
            item["params"] = s.explicit_values->params;
            item["pixel_side"] = s.explicit_values->pixel_side;
        }
        j.push_back(std::move(item));
    }
    return j;
}

// SyntheticSpec from JSON (the `simulate` input file).

inline SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
    SyntheticSpec spec;
    spec.true_model = model_from_json(j.at("true_model"));
    spec.hours_grid = j.at("hours_grid").get<std::vector<double>>();
    spec.params_grid = j.at("params_grid").get<std::vector<double>>();
    spec.pixels_grid = j.at("pixels_grid").get<std::vector<double>>();
    spec.repeats = j.value("repeats", 1);
    spec.noise_sd = j.value("noise_sd", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.paper_design = j.value("paper_design", false);
    if (j.contains("benchmark")) {
        auto b = parse_benchmark(j.at("benchmark").get<std::string>());
        if (!b) throw Error("unknown benchmark in synthetic spec");
        spec.benchmark = *b;
    }
    if (j.contains("condition")) {
        auto c = parse_condition(j.at("condition").get<std::string>());
        if (!c) throw Error("unknown condition in synthetic spec");
        spec.condition = *c;
    }
    return spec;
}

inline constexpr std::string_view kProjectionCsvHeader =
    "scenario,hours,years,params,pixel_side,projected_accuracy,threshold_reached";

inline std::string projection_csv(const std::vector<Projection>& projections) {
    std::string out(kProjectionCsvHeader);
    out.push_back('\n');
    for (const Projection& p : projections) {
        out += p.scenario.name;
        out.push_back(',');
        out += detail::format_double(p.hours);
        out.push_back(',');
        out += detail::format_double(p.years);
        out.push_back(',');
        out += detail::format_double(p.params);
        out.push_back(',');
        out += std::to_string(p.pixel_side);
        out.push_back(',');
        out += detail::format_double(p.projected_accuracy);
        out.push_back(',');
        out += p.threshold_reached ? "true" : "false";
        out.push_back('\n');
    }
    return out;
}

}  // namespace scaling_atlas
