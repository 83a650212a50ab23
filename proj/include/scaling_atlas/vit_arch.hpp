#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "scaling_atlas/errors.hpp"

namespace scaling_atlas {

/// Vision-transformer encoder hyperparameters. Only the encoder is counted:
/// the masked-autoencoder decoder is discarded after pretraining, so the
/// model-size axis of the scaling fits describes the encoder alone.
struct VitConfig {
    std::string name;
    int width = 0;   ///< embedding dimension
    int depth = 0;   ///< transformer blocks
    int heads = 0;
    int patch = 14;
    double mlp_ratio = 4.0;
    int channels = 3;
};

inline void validate_vit_config(const VitConfig& cfg) {
    if (cfg.width <= 0 || cfg.depth < 0 || cfg.heads <= 0 || cfg.patch <= 0 ||
        cfg.channels <= 0 || !(cfg.mlp_ratio > 0.0))
        throw std::invalid_argument("vit config: dimensions must be positive");
    if (cfg.width % cfg.heads != 0)
        throw std::invalid_argument("vit config: width must be divisible by heads");
}

/// The four standard /14 sizes: vit-s14, vit-b14, vit-l14, vit-h14.
inline std::optional<VitConfig> vit_preset(std::string_view name) {
    if (name == "vit-s14") return VitConfig{"ViT-S/14", 384, 12, 6};
    if (name == "vit-b14") return VitConfig{"ViT-B/14", 768, 12, 12};
    if (name == "vit-l14") return VitConfig{"ViT-L/14", 1024, 24, 16};
    if (name == "vit-h14") return VitConfig{"ViT-H/14", 1280, 32, 16};
    return std::nullopt;
}

/// Encoder parameter count: patch embedding, per-block attention (four
/// width-by-width projections with biases), MLP, two layer-norms, then the
/// final norm, class token, and positional embeddings over the canonical
/// 224-pixel grid. No classification head, no decoder.
inline long long param_count(const VitConfig& cfg) {
    validate_vit_config(cfg);
    const long long w = cfg.width;
    const long long patch_embed = static_cast<long long>(cfg.channels) * cfg.patch * cfg.patch * w + w;
    const long long attention = 4 * w * w + 4 * w;
    const long long mlp = std::llround(2.0 * cfg.mlp_ratio * static_cast<double>(w) * static_cast<double>(w) +
                                       (cfg.mlp_ratio + 1.0) * static_cast<double>(w));
    const long long norms = 4 * w;
    const long long grid224 = 224 / cfg.patch;
    const long long pos_embed = (grid224 * grid224 + 1) * w;
    return patch_embed + cfg.depth * (attention + mlp + norms) + 2 * w + w + pos_embed;
}

struct MaskSpec {
    double mask_ratio = 0.0;  ///< fraction of patch tokens hidden, in [0, 1)
};

inline void validate_mask(const MaskSpec& mask) {
    if (!(mask.mask_ratio >= 0.0 && mask.mask_ratio < 1.0))
        throw std::invalid_argument("mask ratio must be in [0, 1)");
}

struct TokenBudget {
    int side = 0;
    int patch = 0;
    long long grid = 0;            ///< tokens per image side
    long long total_tokens = 0;    ///< grid^2
    long long visible_tokens = 0;  ///< floor(total * (1 - mask_ratio))
};

/// Patch-token counts for an image side under a masking ratio. Only visible
/// tokens pass through the encoder. Remainder pixels beyond the last full
/// patch are discarded (all the standard resolutions divide evenly).
inline TokenBudget token_budget(int side, int patch, const MaskSpec& mask) {
    validate_mask(mask);
    if (patch <= 0) throw std::invalid_argument("token_budget: patch must be positive");
    if (side < patch) throw SideTooSmall("token_budget: side " + std::to_string(side) +
                                         " is smaller than patch " + std::to_string(patch));
    TokenBudget b;
    b.side = side;
    b.patch = patch;
    b.grid = side / patch;
    b.total_tokens = b.grid * b.grid;
    b.visible_tokens = static_cast<long long>(
        std::floor(static_cast<double>(b.total_tokens) * (1.0 - mask.mask_ratio)));
    if (b.visible_tokens < 1) b.visible_tokens = 1;
    return b;
}

/// Ratio of encoder forward FLOPs with masking vs without, with per-block
/// cost 12*T*width^2 + 2*T^2*width (linear layers plus the attention matrix
/// terms). Always in (0, 1]; bounded below by (1 - mask_ratio)^2.
inline double encoder_flops_ratio(const MaskSpec& mask, long long total_tokens,
                                  const VitConfig& cfg) {
    validate_mask(mask);
    validate_vit_config(cfg);
    if (total_tokens <= 0) throw std::invalid_argument("encoder_flops_ratio: no tokens");
    const long long visible = std::max<long long>(
        1, static_cast<long long>(
               std::floor(static_cast<double>(total_tokens) * (1.0 - mask.mask_ratio))));
    const double w = static_cast<double>(cfg.width);
    const auto cost = [&](double tokens) { return 12.0 * tokens * w * w + 2.0 * tokens * tokens * w; };
    return cost(static_cast<double>(visible)) / cost(static_cast<double>(total_tokens));
}

}  // namespace scaling_atlas
