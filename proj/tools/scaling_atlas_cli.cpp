// scaling-atlas command line: fit scaling models to observation tables,
// project scale-up scenarios, generate synthetic grids, account ViT/MAE
// costs, sample video subsets, and draw the scaling figure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scaling_atlas/scaling_atlas.hpp"

namespace sa = scaling_atlas;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin),
                           std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sa::Error("cannot open '" + path + "' for reading");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sa::Error("cannot open '" + path + "' for writing");
    out << content;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SCALING_ATLAS_SEED")) {
        auto v = sa::detail::parse_uint64(env);
        if (!v) throw sa::Error("SCALING_ATLAS_SEED is not a valid unsigned integer");
        return *v;
    }
    return 0;
}

sa::ModelFamily family_from_flag(const std::string& s) {
    auto f = sa::parse_family(s);
    if (!f)
        throw CLI::ValidationError("--family",
                                   "expected log_poly6, power_product10 or interaction_poly8");
    return *f;
}

sa::Benchmark benchmark_from_flag(const std::string& s) {
    auto b = sa::parse_benchmark(s);
    if (!b) throw CLI::ValidationError("--benchmark", "expected imagenet_top5 or ood_imagenet_top1");
    return *b;
}

sa::FinetuneCondition condition_from_flag(const std::string& s) {
    auto c = sa::parse_condition(s);
    if (!c) throw CLI::ValidationError("--condition", "expected stringent or permissive");
    return *c;
}

/// Applies optional --benchmark/--condition filters and checks the result is
/// a single benchmark-condition slice.
sa::ObservationSet slice_observations(const sa::ObservationSet& raw,
                                      const std::string& benchmark_flag,
                                      const std::string& condition_flag) {
    sa::ObservationSet set = raw;
    if (!benchmark_flag.empty() || !condition_flag.empty()) {
        if (benchmark_flag.empty() || condition_flag.empty())
            throw sa::Error("--benchmark and --condition must be given together");
        set = sa::filter(raw, benchmark_from_flag(benchmark_flag),
                         condition_from_flag(condition_flag));
    }
    if (set.empty()) throw sa::Error("no observations after filtering");
    if (!sa::is_single_slice(set))
        throw sa::Error(
            "observations span multiple benchmarks/conditions; pass --benchmark and --condition");
    return set;
}

std::string sig3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string sig6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int run(int argc, char** argv) {
    CLI::App app{"scaling-atlas: multi-factor neural scaling-law toolkit"};
    app.require_subcommand(1);

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "fit a scaling model to an observation CSV");
    std::string fit_family = "log_poly6", fit_in, fit_out = "-";
    std::string fit_benchmark, fit_condition;
    std::uint64_t fit_seed = default_seed();
    int fit_restarts = 32;
    int fit_max_iterations = sa::OptimOptions{}.max_iterations;
    fit_cmd->add_option("--family", fit_family, "model family")->capture_default_str();
    fit_cmd->add_option("--in", fit_in, "observation CSV path or -")->required();
    fit_cmd->add_option("--out", fit_out, "output JSON path or -")->capture_default_str();
    fit_cmd->add_option("--seed", fit_seed, "restart initialization seed");
    fit_cmd->add_option("--restarts", fit_restarts, "independent restarts")->capture_default_str();
    fit_cmd->add_option("--max-iterations", fit_max_iterations, "per-restart iteration cap")
        ->capture_default_str();
    fit_cmd->add_option("--benchmark", fit_benchmark, "filter to this benchmark");
    fit_cmd->add_option("--condition", fit_condition, "filter to this finetuning condition");
    fit_cmd->callback([&] {
        sa::ObservationSet set = slice_observations(sa::ingest_observations(read_input(fit_in)),
                                                    fit_benchmark, fit_condition);
        sa::FitSpec spec;
        spec.family = family_from_flag(fit_family);
        spec.restarts = fit_restarts;
        spec.seed = fit_seed;
        spec.optim_options.max_iterations = fit_max_iterations;
        sa::FitResult result = sa::fit(set, spec);
        if (result.degenerate)
            std::cerr << "warning: fewer observations (" << set.size() << ") than parameters ("
                      << sa::param_count(spec.family) << ")\n";
        write_output(fit_out, sa::fit_result_to_json(result).dump(2) + "\n");
        std::cerr << "fit: sse=" << sig3(result.sse) << " rmse=" << sig3(result.rmse)
                  << " converged=" << (result.converged ? "yes" : "no") << "\n";
    });

    // ---- project ----
    auto* project_cmd = app.add_subcommand("project", "project scale-up scenarios from a fit");
    std::string project_fit, project_scenarios, project_out = "-";
    std::string project_benchmark = "imagenet_top5";
    sa::ReferencePoint project_ref;
    std::vector<double> project_multipliers;
    double project_solve_max = 0.0;
    project_cmd->add_option("--fit", project_fit, "fit result JSON")->required();
    project_cmd->add_option("--ref-hours", project_ref.hours, "reference pretraining hours")
        ->capture_default_str();
    project_cmd->add_option("--ref-params", project_ref.params, "reference parameter count")
        ->capture_default_str();
    project_cmd->add_option("--ref-side", project_ref.pixel_side, "reference image side, pixels")
        ->capture_default_str();
    project_cmd->add_option("--patch", project_ref.patch, "patch size for side snapping")
        ->capture_default_str();
    project_cmd->add_option("--multiplier", project_multipliers,
                            "uniform scale factor (repeatable)");
    project_cmd->add_option("--scenarios", project_scenarios, "scenario JSON file");
    project_cmd->add_option("--benchmark", project_benchmark, "threshold benchmark")
        ->capture_default_str();
    project_cmd->add_option("--solve-max", project_solve_max,
                            "also solve for the smallest threshold-crossing multiplier up to this");
    project_cmd->add_option("--out", project_out, "projection CSV path or -")
        ->capture_default_str();
    project_cmd->callback([&] {
        sa::FitResult fit = sa::fit_result_from_json(nlohmann::json::parse(read_input(project_fit)));
        sa::Benchmark benchmark = benchmark_from_flag(project_benchmark);
        std::vector<sa::Scenario> scenarios;
        if (!project_scenarios.empty()) {
            auto from_file =
                sa::scenarios_from_json(nlohmann::json::parse(read_input(project_scenarios)));
            scenarios.insert(scenarios.end(), from_file.begin(), from_file.end());
        }
        for (double m : project_multipliers)
            scenarios.push_back(sa::multiplier_scenario("x" + sa::detail::format_double(m), m));
        if (scenarios.empty())
            throw sa::Error("no scenarios: pass --multiplier and/or --scenarios");

        std::vector<sa::Projection> projections;
        projections.reserve(scenarios.size());
        for (const sa::Scenario& s : scenarios)
            projections.push_back(sa::project(fit, project_ref, s, benchmark));
        write_output(project_out, sa::projection_csv(projections));

        // 3-significant-figure summary; display only, never parsed back
        for (const sa::Projection& p : projections)
            std::cerr << p.scenario.name << ": years=" << sig3(p.years)
                      << " params=" << sig3(p.params) << " side=" << p.pixel_side
                      << " accuracy=" << sig3(p.projected_accuracy)
                      << (p.threshold_reached ? " (threshold reached)" : "") << "\n";
        if (project_solve_max > 1.0) {
            auto crossing = sa::solve_threshold(fit, project_ref, benchmark, project_solve_max);
            if (!crossing) {
                std::cerr << "threshold not reached below x" << sig3(project_solve_max) << "\n";
            } else {
                std::cerr << "threshold crossing at x" << sig3(crossing->multiplier)
                          << (crossing->monotone ? "" : " (non-monotone projection, low confidence)")
                          << "\n";
            }
        }
    });

    // ---- simulate ----
    auto* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic observation CSV");
    std::string simulate_spec, simulate_out = "-";
    std::optional<std::uint64_t> simulate_seed;
    simulate_cmd->add_option("--spec", simulate_spec, "synthetic spec JSON path or -")->required();
    simulate_cmd->add_option("--out", simulate_out, "observation CSV path or -")
        ->capture_default_str();
    simulate_cmd->add_option("--seed", simulate_seed, "override the spec's seed");
    simulate_cmd->callback([&] {
        sa::SyntheticSpec spec =
            sa::synthetic_spec_from_json(nlohmann::json::parse(read_input(simulate_spec)));
        if (simulate_seed) spec.seed = *simulate_seed;
        sa::ObservationSet set = sa::generate_synthetic(spec);
        write_output(simulate_out, sa::serialize_observations(set));
        std::cerr << "simulate: " << set.size() << " observations\n";
    });

    // ---- arch ----
    auto* arch_cmd = app.add_subcommand("arch", "ViT parameter count and MAE token budget");
    std::string arch_preset;
    int arch_width = 0, arch_depth = 0, arch_heads = 0, arch_patch = 14, arch_channels = 3;
    double arch_mlp_ratio = 4.0, arch_mask = 0.8;
    int arch_side = 224;
    arch_cmd->add_option("--preset", arch_preset, "vit-s14 | vit-b14 | vit-l14 | vit-h14");
    arch_cmd->add_option("--width", arch_width, "embedding dimension");
    arch_cmd->add_option("--depth", arch_depth, "transformer blocks");
    arch_cmd->add_option("--heads", arch_heads, "attention heads");
    arch_cmd->add_option("--patch", arch_patch, "patch size")->capture_default_str();
    arch_cmd->add_option("--mlp-ratio", arch_mlp_ratio, "MLP expansion ratio")
        ->capture_default_str();
    arch_cmd->add_option("--channels", arch_channels, "input channels")->capture_default_str();
    arch_cmd->add_option("--side", arch_side, "image side, pixels")->capture_default_str();
    arch_cmd->add_option("--mask", arch_mask, "masking ratio in [0,1)")->capture_default_str();
    arch_cmd->callback([&] {
        sa::VitConfig cfg;
        if (!arch_preset.empty()) {
            auto preset = sa::vit_preset(arch_preset);
            if (!preset)
                throw CLI::ValidationError("--preset",
                                           "expected vit-s14, vit-b14, vit-l14 or vit-h14");
            cfg = *preset;
            if (arch_patch != 14) cfg.patch = arch_patch;
        } else {
            if (arch_width <= 0 || arch_heads <= 0)
                throw sa::Error("pass --preset or --width/--depth/--heads");
            cfg = sa::VitConfig{"custom", arch_width, arch_depth, arch_heads,
                                arch_patch,  arch_mlp_ratio, arch_channels};
        }
        sa::MaskSpec mask{arch_mask};
        sa::TokenBudget budget = sa::token_budget(arch_side, cfg.patch, mask);
        std::string out;
        out += "name: " + cfg.name + "\n";
        out += "params: " + std::to_string(sa::param_count(cfg)) + "\n";
        out += "grid: " + std::to_string(budget.grid) + "x" + std::to_string(budget.grid) + "\n";
        out += "tokens_total: " + std::to_string(budget.total_tokens) + "\n";
        out += "tokens_visible: " + std::to_string(budget.visible_tokens) + "\n";
        out += "flops_ratio: " +
               sa::detail::format_double(sa::encoder_flops_ratio(mask, budget.total_tokens, cfg)) +
               "\n";
        std::cout << out;
    });

    // ---- sample ----
    auto* sample_cmd = app.add_subcommand("sample", "draw a continuous-chunk video subset");
    std::string sample_manifest, sample_out = "-";
    double sample_fraction = 1.0;
    std::uint64_t sample_seed = default_seed();
    int sample_repeat = 0, sample_num_chunks = 1;
    sample_cmd->add_option("--manifest", sample_manifest,
                           "manifest CSV (video_id,duration_hours); default: built-in corpus");
    sample_cmd->add_option("--fraction", sample_fraction, "fraction of total hours in (0,1]")
        ->required();
    sample_cmd->add_option("--seed", sample_seed, "sampling seed");
    sample_cmd->add_option("--repeat", sample_repeat, "repeat index")->capture_default_str();
    sample_cmd->add_option("--num-chunks", sample_num_chunks,
                           "split the subset into this many disjoint chunks")
        ->capture_default_str();
    sample_cmd->add_option("--out", sample_out, "chunk plan CSV path or -")->capture_default_str();
    sample_cmd->callback([&] {
        sa::VideoManifest manifest = sample_manifest.empty()
                                         ? sa::paper_manifest()
                                         : sa::parse_manifest_csv(read_input(sample_manifest));
        sa::ChunkPlan plan = sa::sample_chunks_multi(manifest, sample_fraction, sample_seed,
                                                     sample_repeat, sample_num_chunks);
        write_output(sample_out, sa::chunk_plan_csv(plan));
        std::cerr << "sample: " << plan.segments.size() << " segments, "
                  << sig6(plan.total_hours()) << " hours, "
                  << sa::frame_count(plan.total_hours()) << " frames at 1 fps\n";
    });

    // ---- plot ----
    auto* plot_cmd = app.add_subcommand("plot", "render the scaling figure as SVG");
    std::string plot_in, plot_fit, plot_scenarios, plot_out = "-", plot_title;
    std::string plot_benchmark, plot_condition;
    sa::ReferencePoint plot_ref;
    int plot_width = 960, plot_height = 640;
    plot_cmd->add_option("--in", plot_in, "observation CSV path or -")->required();
    plot_cmd->add_option("--fit", plot_fit, "fit result JSON")->required();
    plot_cmd->add_option("--scenarios", plot_scenarios, "scenario JSON for star markers");
    plot_cmd->add_option("--ref-hours", plot_ref.hours, "reference hours for scenarios")
        ->capture_default_str();
    plot_cmd->add_option("--ref-params", plot_ref.params, "reference params for scenarios")
        ->capture_default_str();
    plot_cmd->add_option("--ref-side", plot_ref.pixel_side, "reference side for scenarios")
        ->capture_default_str();
    plot_cmd->add_option("--patch", plot_ref.patch, "patch size for side snapping")
        ->capture_default_str();
    plot_cmd->add_option("--benchmark", plot_benchmark, "filter to this benchmark");
    plot_cmd->add_option("--condition", plot_condition, "filter to this finetuning condition");
    plot_cmd->add_option("--title", plot_title, "figure title");
    plot_cmd->add_option("--width", plot_width, "SVG width")->capture_default_str();
    plot_cmd->add_option("--height", plot_height, "SVG height")->capture_default_str();
    plot_cmd->add_option("--out", plot_out, "SVG path or -")->capture_default_str();
    plot_cmd->callback([&] {
        sa::ObservationSet set = slice_observations(sa::ingest_observations(read_input(plot_in)),
                                                    plot_benchmark, plot_condition);
        sa::FitResult fit = sa::fit_result_from_json(nlohmann::json::parse(read_input(plot_fit)));
        sa::Benchmark benchmark = set.observations.front().benchmark;

        std::vector<sa::Projection> stars;
        if (!plot_scenarios.empty()) {
            auto scenarios =
                sa::scenarios_from_json(nlohmann::json::parse(read_input(plot_scenarios)));
            for (const sa::Scenario& s : scenarios)
                stars.push_back(sa::project(fit, plot_ref, s, benchmark));
        }

        sa::PlotOptions options;
        options.width = plot_width;
        options.height = plot_height;
        options.title = plot_title;
        options.threshold = sa::human_threshold(benchmark);
        write_output(plot_out, sa::render_scaling_plot(set, fit.model, stars, options));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
