#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "scaling_atlas/detail/text.hpp"
#include "scaling_atlas/errors.hpp"
#include "scaling_atlas/rng.hpp"

namespace scaling_atlas {

struct ManifestEntry {
    std::string video_id;
    double duration_hours = 0.0;
};

/// An ordered list of videos. Manifest order defines the concatenated
/// timeline that subsets are drawn from.
struct VideoManifest {
    std::vector<ManifestEntry> entries;

    double total_hours() const {
        double total = 0.0;
        for (const ManifestEntry& e : entries) total += e.duration_hours;
        return total;
    }
};

inline void validate_manifest(const VideoManifest& manifest) {
    if (manifest.entries.empty()) throw std::invalid_argument("manifest: no entries");
    std::unordered_set<std::string_view> ids;
    for (const ManifestEntry& e : manifest.entries) {
        if (!(e.duration_hours > 0.0) || !std::isfinite(e.duration_hours))
            throw std::invalid_argument("manifest: durations must be positive");
        if (!ids.insert(e.video_id).second)
            throw std::invalid_argument("manifest: duplicate video id '" + e.video_id + "'");
    }
}

/// The 4971-hour human-like video corpus: six datasets, hours as published.
/// The UT Ego total is not published directly and is inferred by subtraction
/// from the corpus total, so it is approximate.
inline VideoManifest paper_manifest() {
    return VideoManifest{{
        {"ego4d", 3670.0},
        {"ava", 636.0},
        {"saycam", 498.0},
        {"epic_kitchens", 80.0},
        {"krishnacam", 70.0},
        {"ut_ego", 17.0},
    }};
}

struct Segment {
    std::string video_id;
    double start_hours = 0.0;
    double end_hours = 0.0;

    double length() const { return end_hours - start_hours; }
};

/// A sampled subset: contiguous per-video segments in run order. Segment
/// lengths sum to fraction * manifest total (continuous-time model; frames
/// are only quantized by frame_count).
struct ChunkPlan {
    std::vector<Segment> segments;
    double fraction = 1.0;
    std::uint64_t seed = 0;
    int repeat = 0;

    double total_hours() const {
        double total = 0.0;
        for (const Segment& s : segments) total += s.length();
        return total;
    }
};

namespace detail {

/// Emits the per-video pieces of the timeline interval [a, b), 0 <= a <= b.
inline void cut_linear(const VideoManifest& manifest, double a, double b,
                       std::vector<Segment>& out) {
    double video_start = 0.0;
    for (const ManifestEntry& e : manifest.entries) {
        const double video_end = video_start + e.duration_hours;
        const double lo = std::max(a, video_start);
        const double hi = std::min(b, video_end);
        if (hi > lo) out.push_back({e.video_id, lo - video_start, hi - video_start});
        video_start = video_end;
    }
}

/// Cuts [run_start, run_start + run_length) out of the concatenated
/// timeline, wrapping once around the corpus end if needed. Segments come
/// out in run order.
inline void cut_run(const VideoManifest& manifest, double run_start, double run_length,
                    std::vector<Segment>& out) {
    const double total = manifest.total_hours();
    const double run_end = run_start + run_length;
    if (run_end <= total) {
        cut_linear(manifest, run_start, run_end, out);
    } else {
        cut_linear(manifest, run_start, total, out);
        cut_linear(manifest, 0.0, run_end - total, out);
    }
}

}  // namespace detail

/// Draws the paper-style subset: one temporally contiguous run of
/// fraction * total hours, starting at a uniformly random offset into the
/// concatenated timeline and wrapping across video boundaries (and the
/// corpus end) as extra segments. Deterministic given
/// (manifest, fraction, seed, repeat); the repeat index selects an
/// independent stream from the same seed.
inline ChunkPlan sample_chunks(const VideoManifest& manifest, double fraction,
                               std::uint64_t seed, int repeat) {
    validate_manifest(manifest);
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw FractionOutOfRange("fraction must be in (0, 1], got " +
                                 detail::format_double(fraction));

    ChunkPlan plan;
    plan.fraction = fraction;
    plan.seed = seed;
    plan.repeat = repeat;

    if (fraction == 1.0) {
        for (const ManifestEntry& e : manifest.entries)
            plan.segments.push_back({e.video_id, 0.0, e.duration_hours});
        return plan;
    }

    const double total = manifest.total_hours();
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(repeat)));
    const double offset = rng.next_double() * total;
    detail::cut_run(manifest, offset, fraction * total, plan.segments);
    return plan;
}

/// Escape hatch beyond the single-run protocol: num_chunks independent
/// contiguous chunks of equal length, one per equal arc of the timeline so
/// they can never overlap. num_chunks == 1 is exactly sample_chunks.
inline ChunkPlan sample_chunks_multi(const VideoManifest& manifest, double fraction,
                                     std::uint64_t seed, int repeat, int num_chunks) {
    if (num_chunks < 1) throw std::invalid_argument("num_chunks must be >= 1");
    if (num_chunks == 1) return sample_chunks(manifest, fraction, seed, repeat);
    validate_manifest(manifest);
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw FractionOutOfRange("fraction must be in (0, 1], got " +
                                 detail::format_double(fraction));

    ChunkPlan plan;
    plan.fraction = fraction;
    plan.seed = seed;
    plan.repeat = repeat;

    const double total = manifest.total_hours();
    const double arc = total / num_chunks;
    const double chunk_len = fraction * total / num_chunks;
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(repeat)));
    for (int i = 0; i < num_chunks; ++i) {
        const double slack = arc - chunk_len;
        const double start = arc * i + rng.next_double() * slack;
        detail::cut_run(manifest, start, chunk_len, plan.segments);
    }
    return plan;
}

/// Frames obtained by temporal subsampling: floor(hours * 3600 * fps).
inline long long frame_count(double hours, double fps = 1.0) {
    if (!(hours > 0.0) || !(fps > 0.0))
        throw std::invalid_argument("frame_count: hours and fps must be positive");
    return static_cast<long long>(std::floor(hours * 3600.0 * fps));
}

inline constexpr std::string_view kManifestCsvHeader = "video_id,duration_hours";
inline constexpr std::string_view kChunkPlanCsvHeader = "video_id,start_hours,end_hours";

inline VideoManifest parse_manifest_csv(std::string_view csv_text) {
    auto lines = detail::split(csv_text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || detail::strip_cr(lines[0]) != kManifestCsvHeader)
        throw MalformedHeader("expected header: " + std::string(kManifestCsvHeader));
    VideoManifest manifest;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto fields = detail::split(detail::strip_cr(lines[i]), ',');
        if (fields.size() != 2) throw RowParseError(i + 1, "expected 2 fields");
        auto hours = detail::parse_double(fields[1]);
        if (!hours || !(*hours > 0.0)) throw RowParseError(i + 1, "bad duration");
        manifest.entries.push_back({std::string(fields[0]), *hours});
    }
    validate_manifest(manifest);
    return manifest;
}

inline std::string manifest_csv(const VideoManifest& manifest) {
    std::string out(kManifestCsvHeader);
    out.push_back('\n');
    for (const ManifestEntry& e : manifest.entries) {
        out += e.video_id;
        out.push_back(',');
        out += detail::format_double(e.duration_hours);
        out.push_back('\n');
    }
    return out;
}

inline std::string chunk_plan_csv(const ChunkPlan& plan) {
    std::string out(kChunkPlanCsvHeader);
    out.push_back('\n');
    for (const Segment& s : plan.segments) {
        out += s.video_id;
        out.push_back(',');
        out += detail::format_double(s.start_hours);
        out.push_back(',');
        out += detail::format_double(s.end_hours);
        out.push_back('\n');
    }
    return out;
}

}  // namespace scaling_atlas
