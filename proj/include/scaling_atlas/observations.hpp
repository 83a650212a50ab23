#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "scaling_atlas/detail/text.hpp"
#include "scaling_atlas/errors.hpp"

namespace scaling_atlas {

enum class Benchmark { ImageNetTop5, OodImageNetTop1 };
enum class FinetuneCondition { Stringent, Permissive };

/// Human reference accuracy in percent: 90% top-5 on ImageNet, 72.3% top-1
/// on the OOD ImageNet suite.
inline double human_threshold(Benchmark b) {
    return b == Benchmark::ImageNetTop5 ? 90.0 : 72.3;
}

inline std::string_view to_string(Benchmark b) {
    return b == Benchmark::ImageNetTop5 ? "imagenet_top5" : "ood_imagenet_top1";
}

inline std::string_view to_string(FinetuneCondition c) {
    return c == FinetuneCondition::Stringent ? "stringent" : "permissive";
}

inline std::optional<Benchmark> parse_benchmark(std::string_view s) {
    if (s == "imagenet_top5") return Benchmark::ImageNetTop5;
    if (s == "ood_imagenet_top1") return Benchmark::OodImageNetTop1;
    return std::nullopt;
}

inline std::optional<FinetuneCondition> parse_condition(std::string_view s) {
    if (s == "stringent") return FinetuneCondition::Stringent;
    if (s == "permissive") return FinetuneCondition::Permissive;
    return std::nullopt;
}

/// Side length of a perfect-square pixel count, or 0 if not a perfect square.
inline long long exact_square_side(long long pixels) {
    if (pixels <= 0) return 0;
    long long side = std::llround(std::sqrt(static_cast<double>(pixels)));
    for (long long s = std::max(1LL, side - 1); s <= side + 1; ++s) {
        if (s * s == pixels) return s;
    }
    return 0;
}

/// One measured point of the scaling grid: accuracy of a model with `params`
/// parameters pretrained on `hours` of video at `pixels` image pixels.
struct Observation {
    double hours = 0.0;           ///< pretraining video hours (n)
    long long params = 0;         ///< model parameter count (d)
    long long pixels = 0;         ///< image pixel count, a perfect square (r)
    double accuracy = 0.0;        ///< percent in [0, 100]
    Benchmark benchmark = Benchmark::ImageNetTop5;
    FinetuneCondition condition = FinetuneCondition::Permissive;
    int repeat = 0;               ///< subset-sampling repeat index
    std::string arch_label;       ///< e.g. "ViT-H/14@476"

    long long pixel_side() const { return exact_square_side(pixels); }

    bool operator==(const Observation&) const = default;
};

/// Throws std::invalid_argument if the observation violates its invariants.
inline void validate_observation(const Observation& o) {
    if (!(o.hours > 0.0) || !std::isfinite(o.hours))
        throw std::invalid_argument("observation: hours must be positive and finite");
    if (o.params <= 0) throw std::invalid_argument("observation: params must be positive");
    if (o.pixels <= 0) throw std::invalid_argument("observation: pixels must be positive");
    if (exact_square_side(o.pixels) == 0)
        throw std::invalid_argument("observation: pixels must be a perfect square");
    if (!(o.accuracy >= 0.0 && o.accuracy <= 100.0))
        throw std::invalid_argument("observation: accuracy must be in [0, 100]");
    if (o.repeat < 0) throw std::invalid_argument("observation: repeat must be non-negative");
}

/// An ordered collection of observations. `source_label` is provenance
/// metadata and does not participate in equality.
struct ObservationSet {
    std::vector<Observation> observations;
    std::string source_label;

    std::size_t size() const { return observations.size(); }
    bool empty() const { return observations.empty(); }

    bool operator==(const ObservationSet& other) const {
        return observations == other.observations;
    }
};

inline constexpr std::string_view kObservationCsvHeader =
    "benchmark,condition,hours,params,pixels,accuracy,repeat,arch_label";

/// Parses the observation CSV format. The header must match
/// kObservationCsvHeader exactly; every column is mandatory. Rows that are
/// bytewise identical are rejected (repeats are distinguished by the
/// `repeat` column, so a true duplicate is always an input mistake).
inline ObservationSet ingest_observations(std::string_view csv_text) {
    auto lines = detail::split(csv_text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || detail::strip_cr(lines[0]) != kObservationCsvHeader)
        throw MalformedHeader("expected header: " + std::string(kObservationCsvHeader));

    ObservationSet set;
    set.source_label = "csv";
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        std::string_view line = detail::strip_cr(lines[i]);
        if (line.empty()) throw RowParseError(line_no, "empty row");
        if (!seen.insert(std::string(line)).second) throw DuplicateRow(line_no);

        auto fields = detail::split(line, ',');
        if (fields.size() != 8)
            throw RowParseError(line_no, "expected 8 fields, got " + std::to_string(fields.size()));

        Observation o;
        auto bench = parse_benchmark(fields[0]);
        if (!bench) throw RowParseError(line_no, "unknown benchmark '" + std::string(fields[0]) + "'");
        o.benchmark = *bench;

        auto cond = parse_condition(fields[1]);
        if (!cond) throw RowParseError(line_no, "unknown condition '" + std::string(fields[1]) + "'");
        o.condition = *cond;

        auto hours = detail::parse_double(fields[2]);
        if (!hours || !(*hours > 0.0) || !std::isfinite(*hours))
            throw RowParseError(line_no, "hours must be a positive number");
        o.hours = *hours;

        auto params = detail::parse_int(fields[3]);
        if (!params || *params <= 0) throw RowParseError(line_no, "params must be a positive integer");
        o.params = *params;

        auto pixels = detail::parse_int(fields[4]);
        if (!pixels || *pixels <= 0) throw RowParseError(line_no, "pixels must be a positive integer");
        if (exact_square_side(*pixels) == 0)
            throw RowParseError(line_no, "pixels must be a perfect square");
        o.pixels = *pixels;

        auto accuracy = detail::parse_double(fields[5]);
        if (!accuracy || !(*accuracy >= 0.0 && *accuracy <= 100.0))
            throw RowParseError(line_no, "accuracy must be in [0, 100]");
        o.accuracy = *accuracy;

        auto repeat = detail::parse_int(fields[6]);
        if (!repeat || *repeat < 0)
            throw RowParseError(line_no, "repeat must be a non-negative integer");
        o.repeat = static_cast<int>(*repeat);

        o.arch_label = std::string(fields[7]);
        set.observations.push_back(std::move(o));
    }
    return set;
}

/// Canonical CSV serialization; ingest_observations(serialize_observations(s))
/// reproduces s exactly (numbers use shortest round-trip formatting).
inline std::string serialize_observations(const ObservationSet& set) {
    std::string out(kObservationCsvHeader);
    out.push_back('\n');
    for (const Observation& o : set.observations) {
        out += to_string(o.benchmark);
        out.push_back(',');
        out += to_string(o.condition);
        out.push_back(',');
        out += detail::format_double(o.hours);
        out.push_back(',');
        out += std::to_string(o.params);
        out.push_back(',');
        out += std::to_string(o.pixels);
        out.push_back(',');
        out += detail::format_double(o.accuracy);
        out.push_back(',');
        out += std::to_string(o.repeat);
        out.push_back(',');
        out += o.arch_label;
        out.push_back('\n');
    }
    return out;
}

/// Selects the observations of one benchmark-condition slice, preserving
/// order. An empty result is legal.
inline ObservationSet filter(const ObservationSet& set, Benchmark benchmark,
                             FinetuneCondition condition) {
    ObservationSet out;
    out.source_label = set.source_label;
    for (const Observation& o : set.observations) {
        if (o.benchmark == benchmark && o.condition == condition) out.observations.push_back(o);
    }
    return out;
}

/// True when every observation shares one benchmark and condition.
inline bool is_single_slice(const ObservationSet& set) {
    for (const Observation& o : set.observations) {
        if (o.benchmark != set.observations.front().benchmark ||
            o.condition != set.observations.front().condition)
            return false;
    }
    return true;
}

}  // namespace scaling_atlas
