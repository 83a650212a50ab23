#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "scaling_atlas/json_io.hpp"
#include "scaling_atlas/rng.hpp"
#include "scaling_atlas/svg_plot.hpp"

using namespace scaling_atlas;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("scaling model JSON round trip", "[io]") {
    SplitMix64 rng(2025);
    for (ModelFamily family : {ModelFamily::LogPoly6, ModelFamily::PowerProduct10,
                               ModelFamily::InteractionPoly8}) {
        std::vector<double> params(param_count(family));
        for (double& p : params) p = rng.uniform(-2.0, 2.0);
        ScalingModel m{family, params};
        nlohmann::json j = model_to_json(m);
        CHECK(j.at("family").get<std::string>() == family_name(family));
        ScalingModel back = model_from_json(j);
        CHECK(back == m);
        // serialization is byte-stable
        CHECK(model_to_json(m).dump() == j.dump());
    }
    SECTION("unknown family rejected") {
        nlohmann::json j{{"family", "mystery"}, {"params", {1, 2, 3}}};
        CHECK_THROWS_AS(model_from_json(j), Error);
    }
    SECTION("wrong parameter count rejected") {
        nlohmann::json j{{"family", "log_poly6"}, {"params", {1, 2, 3}}};
        CHECK_THROWS_AS(model_from_json(j), std::invalid_argument);
    }
}

TEST_CASE("fit result JSON carries the contract fields", "[io]") {
    FitResult fit;
    fit.model = ScalingModel{ModelFamily::LogPoly6, {0.3, 0.5, 0.4, 0.6, 0.1, 0.1}};
    fit.sse = 1.25;
    fit.rmse = 0.25;
    fit.converged = true;
    fit.restart_losses = {2.0, 1.25, 3.5};
    fit.residuals = {0.5, -0.5};  // intentionally not serialized

    nlohmann::json j = fit_result_to_json(fit);
    for (const char* key : {"family", "params", "sse", "rmse", "converged", "restart_losses"})
        CHECK(j.contains(key));
    CHECK_FALSE(j.contains("residuals"));

    FitResult back = fit_result_from_json(j);
    CHECK(back.model == fit.model);
    CHECK(back.sse == fit.sse);
    CHECK(back.rmse == fit.rmse);
    CHECK(back.converged == fit.converged);
    CHECK(back.restart_losses == fit.restart_losses);
}

TEST_CASE("scenario JSON accepts both forms", "[io]") {
    const auto scenarios = scenarios_from_json(nlohmann::json::parse(R"([
        {"name": "x4", "multiplier": 4.0},
        {"name": "custom", "hours": 20000, "params": 2.5e9, "pixel_side": 952}
    ])"));
    REQUIRE(scenarios.size() == 2);
    CHECK(scenarios[0].name == "x4");
    REQUIRE(scenarios[0].multiplier.has_value());
    CHECK(*scenarios[0].multiplier == 4.0);
    CHECK_FALSE(scenarios[0].explicit_values.has_value());
    REQUIRE(scenarios[1].explicit_values.has_value());
    CHECK(scenarios[1].explicit_values->pixel_side == 952);

    SECTION("round trip") {
        CHECK(scenarios_to_json(scenarios_from_json(scenarios_to_json(scenarios))) ==
              scenarios_to_json(scenarios));
    }
    SECTION("non-positive multiplier rejected") {
        CHECK_THROWS_AS(
            scenarios_from_json(nlohmann::json::parse(R"([{"name":"bad","multiplier":0}])")),
            Error);
    }
    SECTION("non-array rejected") {
        CHECK_THROWS_AS(scenarios_from_json(nlohmann::json::object()), Error);
    }
}

TEST_CASE("synthetic spec JSON", "[io]") {
    const auto spec = synthetic_spec_from_json(nlohmann::json::parse(R"({
        "true_model": {"family": "log_poly6", "params": [0.3, 0.5, 0.4, 0.6, 0.1, 0.1]},
        "hours_grid": [5, 50, 500, 1600, 4971],
        "params_grid": [22e6, 633e6],
        "pixels_grid": [50176, 200704, 226576],
        "repeats": 3,
        "noise_sd": 0.5,
        "seed": 17,
        "paper_design": true,
        "benchmark": "ood_imagenet_top1",
        "condition": "stringent"
    })"));
    CHECK(spec.true_model.family == ModelFamily::LogPoly6);
    CHECK(spec.hours_grid.size() == 5);
    CHECK(spec.repeats == 3);
    CHECK(spec.noise_sd == 0.5);
    CHECK(spec.seed == 17);
    CHECK(spec.paper_design);
    CHECK(spec.benchmark == Benchmark::OodImageNetTop1);
    CHECK(spec.condition == FinetuneCondition::Stringent);

    SECTION("defaults") {
        const auto bare = synthetic_spec_from_json(nlohmann::json::parse(R"({
            "true_model": {"family": "interaction_poly8", "params": [0,0,0,0,0,0,0,50]},
            "hours_grid": [10], "params_grid": [1000], "pixels_grid": [196]
        })"));
        CHECK(bare.repeats == 1);
        CHECK(bare.noise_sd == 0.0);
        CHECK_FALSE(bare.paper_design);
        CHECK(bare.benchmark == Benchmark::ImageNetTop5);
        CHECK(bare.condition == FinetuneCondition::Permissive);
    }
}

TEST_CASE("projection CSV", "[io]") {
    Projection p;
    p.scenario = multiplier_scenario("x4", 4.0);
    p.hours = 19884.0;
    p.years = hours_to_years(19884.0);
    p.params = 2.532e9;
    p.pixel_side = 952;
    p.pixels = 952LL * 952LL;
    p.projected_accuracy = 93.6;
    p.threshold_reached = true;

    const std::string csv = projection_csv({p});
    CHECK(csv.rfind("scenario,hours,years,params,pixel_side,projected_accuracy,threshold_reached\n",
                    0) == 0);
    CHECK(csv.find("x4,19884,") != std::string::npos);
    CHECK(csv.find(",952,") != std::string::npos);
    CHECK(csv.find(",true\n") != std::string::npos);
}

TEST_CASE("SVG rendering", "[io]") {
    SyntheticSpec spec;
    spec.true_model = ScalingModel{ModelFamily::LogPoly6, {0.3, 0.5, 0.4, 0.6, 0.1, 0.1}};
    spec.hours_grid = {10, 100, 1000, 4971};
    spec.params_grid = {22e6, 633e6};
    spec.pixels_grid = {50176};
    ObservationSet set = generate_synthetic(spec);
    REQUIRE(set.size() == 8);  // two arch series

    FitResult fit;
    fit.model = spec.true_model;
    ReferencePoint ref;
    std::vector<Projection> stars = {
        project(fit, ref, multiplier_scenario("x4", 4.0), Benchmark::ImageNetTop5),
        project(fit, ref, multiplier_scenario("x25", 25.0), Benchmark::ImageNetTop5),
    };

    PlotOptions options;
    options.title = "synthetic scaling";
    const std::string svg = render_scaling_plot(set, fit.model, stars, options);

    CHECK(svg.rfind("<svg ", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(svg, "class=\"series-curve\"") == 2);
    CHECK(count_occurrences(svg, "class=\"threshold-band\"") == 1);
    CHECK(count_occurrences(svg, "class=\"ref-line-10y\"") == 1);
    CHECK(count_occurrences(svg, "class=\"projection-star\"") == 2);
    CHECK(count_occurrences(svg, "class=\"obs-point\"") == set.size());

    SECTION("byte-stable across renders") {
        CHECK(render_scaling_plot(set, fit.model, stars, options) == svg);
    }
    SECTION("empty slice raises") {
        CHECK_THROWS_AS(render_scaling_plot(ObservationSet{}, fit.model, stars, options),
                        EmptySet);
    }
}
