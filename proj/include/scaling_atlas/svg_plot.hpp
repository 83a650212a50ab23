#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "scaling_atlas/observations.hpp"
#include "scaling_atlas/projection.hpp"
#include "scaling_atlas/scaling_models.hpp"

namespace scaling_atlas {

/// Layout of the scaling figure: accuracy against log-scale pretraining
/// hours, one fitted curve per architecture series, the human-threshold band
/// at the top, the 10-year reference line, and star markers for projected
/// scenarios.
struct PlotOptions {
    int width = 960;
    int height = 640;
    std::string title;
    double threshold = 90.0;             ///< top band starts here (percent)
    double ten_year_hours = 87600.0;     ///< dashed vertical reference line
    int curve_samples = 129;
};

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline constexpr const char* kSeriesColors[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

}  // namespace detail

/// Renders the figure as a standalone SVG string. Output is byte-stable for
/// identical inputs: no timestamps, fixed number formatting.
inline std::string render_scaling_plot(const ObservationSet& slice, const ScalingModel& model,
                                       const std::vector<Projection>& stars,
                                       const PlotOptions& opt = {}) {
    if (slice.empty()) throw EmptySet("render_scaling_plot: no observations");
    validate_model(model);

    // series keyed by arch label, in first-appearance order
    struct Series {
        std::string label;
        double params = 0.0;
        double pixels = 0.0;
        std::vector<const Observation*> points;
    };
    std::vector<Series> series;
    for (const Observation& o : slice.observations) {
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const Series& s) { return s.label == o.arch_label; });
        if (it == series.end()) {
            series.push_back({o.arch_label, static_cast<double>(o.params),
                              static_cast<double>(o.pixels), {}});
            it = series.end() - 1;
        }
        it->points.push_back(&o);
    }

    double h_min = slice.observations.front().hours;
    double h_max = h_min;
    for (const Observation& o : slice.observations) {
        h_min = std::min(h_min, o.hours);
        h_max = std::max(h_max, o.hours);
    }
    double x_lo = std::log10(h_min);
    double x_hi = std::log10(std::max(h_max, opt.ten_year_hours));
    for (const Projection& p : stars) x_hi = std::max(x_hi, std::log10(p.hours));
    const double x_pad = 0.04 * (x_hi - x_lo + 1e-9);
    x_lo -= x_pad;
    x_hi += x_pad;

    const double margin_l = 70, margin_r = 170, margin_t = 40, margin_b = 55;
    const double pw = opt.width - margin_l - margin_r;
    const double ph = opt.height - margin_t - margin_b;
    const auto x_of = [&](double hours) {
        return margin_l + pw * (std::log10(hours) - x_lo) / (x_hi - x_lo);
    };
    const auto y_of = [&](double accuracy) {
        const double a = std::clamp(accuracy, 0.0, 100.0);
        return margin_t + ph * (1.0 - a / 100.0);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
           "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " +
           std::to_string(opt.width) + " " + std::to_string(opt.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (!opt.title.empty())
        svg += "<text x=\"" + detail::fmt2(margin_l) + "\" y=\"24\" font-family=\"sans-serif\" "
               "font-size=\"16\">" + detail::xml_escape(opt.title) + "</text>\n";

    // threshold band: the region at and above human performance
    svg += "<rect class=\"threshold-band\" x=\"" + detail::fmt2(margin_l) + "\" y=\"" +
           detail::fmt2(y_of(100.0)) + "\" width=\"" + detail::fmt2(pw) + "\" height=\"" +
           detail::fmt2(y_of(opt.threshold) - y_of(100.0)) +
           "\" fill=\"#d62728\" fill-opacity=\"0.12\"/>\n";

    // axes
    svg += "<rect x=\"" + detail::fmt2(margin_l) + "\" y=\"" + detail::fmt2(margin_t) +
           "\" width=\"" + detail::fmt2(pw) + "\" height=\"" + detail::fmt2(ph) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";
    for (int dec = static_cast<int>(std::ceil(x_lo)); dec <= static_cast<int>(std::floor(x_hi));
         ++dec) {
        const double x = margin_l + pw * (dec - x_lo) / (x_hi - x_lo);
        svg += "<line x1=\"" + detail::fmt2(x) + "\" y1=\"" + detail::fmt2(margin_t + ph) +
               "\" x2=\"" + detail::fmt2(x) + "\" y2=\"" + detail::fmt2(margin_t + ph + 5) +
               "\" stroke=\"#333333\"/>\n";
        svg += "<text x=\"" + detail::fmt2(x) + "\" y=\"" + detail::fmt2(margin_t + ph + 20) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               detail::fmt_tick(std::pow(10.0, dec)) + "</text>\n";
    }
    for (int acc = 0; acc <= 100; acc += 20) {
        const double y = y_of(acc);
        svg += "<line x1=\"" + detail::fmt2(margin_l - 5) + "\" y1=\"" + detail::fmt2(y) +
               "\" x2=\"" + detail::fmt2(margin_l) + "\" y2=\"" + detail::fmt2(y) +
               "\" stroke=\"#333333\"/>\n";
        svg += "<text x=\"" + detail::fmt2(margin_l - 9) + "\" y=\"" + detail::fmt2(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
               std::to_string(acc) + "</text>\n";
    }
    svg += "<text x=\"" + detail::fmt2(margin_l + pw / 2) + "\" y=\"" +
           detail::fmt2(static_cast<double>(opt.height) - 12) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
           "pretraining video (hours)</text>\n";
    svg += "<text x=\"18\" y=\"" + detail::fmt2(margin_t + ph / 2) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 " + detail::fmt2(margin_t + ph / 2) + ")\">"
           "accuracy (%)</text>\n";

    // 10-year reference line
    if (opt.ten_year_hours > 0.0) {
        const double x = x_of(opt.ten_year_hours);
        svg += "<line class=\"ref-line-10y\" x1=\"" + detail::fmt2(x) + "\" y1=\"" +
               detail::fmt2(margin_t) + "\" x2=\"" + detail::fmt2(x) + "\" y2=\"" +
               detail::fmt2(margin_t + ph) +
               "\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
        svg += "<text x=\"" + detail::fmt2(x + 4) + "\" y=\"" + detail::fmt2(margin_t + 14) +
               "\" font-family=\"sans-serif\" font-size=\"11\">10 years</text>\n";
    }

    // fitted curve and measured points per series
    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color =
            detail::kSeriesColors[si % (sizeof(detail::kSeriesColors) / sizeof(char*))];
        std::string pts;
        for (int i = 0; i < opt.curve_samples; ++i) {
            const double t = static_cast<double>(i) / (opt.curve_samples - 1);
            const double hours =
                std::pow(10.0, std::log10(h_min) + t * (std::log10(h_max) - std::log10(h_min)));
            const double acc = evaluate(model, InputPoint{hours, s.params, s.pixels});
            if (!pts.empty()) pts.push_back(' ');
            pts += detail::fmt2(x_of(hours)) + "," + detail::fmt2(y_of(acc));
        }
        svg += "<polyline class=\"series-curve\" data-series=\"" + detail::xml_escape(s.label) +
               "\" points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.8\"/>\n";
        for (const Observation* o : s.points) {
            svg += "<circle class=\"obs-point\" cx=\"" + detail::fmt2(x_of(o->hours)) +
                   "\" cy=\"" + detail::fmt2(y_of(o->accuracy)) + "\" r=\"3\" fill=\"" + color +
                   "\" fill-opacity=\"0.7\"/>\n";
        }
        // legend
        const double ly = margin_t + 16.0 * (si + 1);
        svg += "<line x1=\"" + detail::fmt2(margin_l + pw + 10) + "\" y1=\"" + detail::fmt2(ly) +
               "\" x2=\"" + detail::fmt2(margin_l + pw + 30) + "\" y2=\"" + detail::fmt2(ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + detail::fmt2(margin_l + pw + 35) + "\" y=\"" + detail::fmt2(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::xml_escape(s.label) +
               "</text>\n";
    }

    // projected scenarios
    for (const Projection& p : stars) {
        const double cx = x_of(p.hours);
        const double cy = y_of(p.projected_accuracy);
        std::string pts;
        for (int i = 0; i < 10; ++i) {
            const double angle = -1.5707963267948966 + i * 0.6283185307179586;
            const double radius = i % 2 == 0 ? 8.0 : 3.4;
            if (!pts.empty()) pts.push_back(' ');
            pts += detail::fmt2(cx + radius * std::cos(angle)) + "," +
                   detail::fmt2(cy + radius * std::sin(angle));
        }
        svg += "<polygon class=\"projection-star\" data-scenario=\"" +
               detail::xml_escape(p.scenario.name) + "\" points=\"" + pts +
               "\" fill=\"#ffd700\" stroke=\"#333333\"/>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace scaling_atlas
