#pragma once

// Fisher-based structured pruning: per-unit importance from squared gate
// gradients, greedy FLOPs-budgeted mask selection, mask application, and
// physical compaction of pruned slices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "decoder.hpp"
#include "gf2.hpp"
#include "mask.hpp"
#include "rng.hpp"
#include "train.hpp"

namespace sap {

struct ImportanceScores {
    std::vector<Vector> head_scores;  // [layer][head]
    std::vector<Vector> ffn_scores;   // [layer][channel]
    std::uint64_t calib_frames = 0;
    std::uint64_t calib_seed = 0;
};

struct CalibConfig {
    std::uint64_t frames = 1024;
    double snr_low_db = 2.0;
    double snr_high_db = 7.0;
    std::uint64_t seed = 1;
};

// score(u) = sum over calibration frames of (dL_BCE/dg_u)^2 with every gate
// at 1. Gates sit on the head context before W_O and on the post-GELU
// channel activation, so a unit whose output never influences the loss
// scores exactly zero.
inline ImportanceScores fisher_importance(const DecoderModel& model, const LinearCode& code,
                                          const CalibConfig& calib) {
    if (calib.frames < 1) throw std::invalid_argument("fisher_importance: frames must be >= 1");
    CodeContext ctx(code.pcm());

    GateSet unit_gates;
    for (const auto& l : model.layers) {
        unit_gates.head.emplace_back(l.heads, 1.0);
        unit_gates.ffn.emplace_back(l.d_ffn, 1.0);
    }

    ImportanceScores scores;
    scores.calib_frames = calib.frames;
    scores.calib_seed = calib.seed;
    for (const auto& l : model.layers) {
        scores.head_scores.emplace_back(l.heads, 0.0);
        scores.ffn_scores.emplace_back(l.d_ffn, 0.0);
    }

    detail::ForwardCache cache;
    DecoderModel grads = zero_like(model);  // accumulated but unused; gate grads are the product
    for (std::uint64_t frame = 0; frame < calib.frames; ++frame) {
        Rng rng = derive_rng(calib.seed, "fisher", {frame});
        TrainSample s =
            draw_train_sample(ctx, code.rate(), calib.snr_low_db, calib.snr_high_db, rng);
        const Vector logits = forward_gated(model, ctx, s.tokens, unit_gates, &cache);
        const Vector dlogits = bce_loss_grad(logits, s.flip_targets);
        GateGrads gg = GateGrads::zeros_like(model);
        backward_gated(model, ctx, cache, s.tokens, dlogits, unit_gates, grads, &gg);
        for (std::size_t l = 0; l < gg.head.size(); ++l) {
            for (std::size_t a = 0; a < gg.head[l].size(); ++a)
                scores.head_scores[l][a] += gg.head[l][a] * gg.head[l][a];
            for (std::size_t u = 0; u < gg.ffn[l].size(); ++u)
                scores.ffn_scores[l][u] += gg.ffn[l][u] * gg.ffn[l][u];
        }
    }
    return scores;
}

// Greedy removal in ascending importance until the retained FLOPs ratio
// drops to 1 - target_ratio. Ties fall to FFN channels before heads, then
// lower layer, then lower index. The final remaining head of the whole
// model is never removed.
inline StructuredMask select_mask(const ImportanceScores& scores, const DecoderArchitecture& arch,
                                  std::size_t seq_len, double target_ratio) {
    arch.validate();
    if (!(target_ratio >= 0.0 && target_ratio < 1.0))
        throw std::invalid_argument("select_mask: target_ratio must lie in [0,1)");
    if (scores.head_scores.size() != arch.layers || scores.ffn_scores.size() != arch.layers)
        throw std::invalid_argument("select_mask: scores do not match architecture");
    for (std::size_t l = 0; l < arch.layers; ++l)
        if (scores.head_scores[l].size() != arch.heads ||
            scores.ffn_scores[l].size() != arch.d_ffn)
            throw std::invalid_argument("select_mask: scores do not match architecture");

    struct Unit {
        double importance;
        int kind;  // 0 = FFN channel, 1 = head; FFN sorts first on ties
        std::size_t layer, index;
        double flops;
    };
    const double head_cost = per_head_flops(arch.d_model, arch.head_dim(), seq_len);
    const double chan_cost = per_ffn_channel_flops(arch.d_model, seq_len);

    std::vector<Unit> units;
    units.reserve(arch.layers * (arch.heads + arch.d_ffn));
    for (std::size_t l = 0; l < arch.layers; ++l) {
        for (std::size_t u = 0; u < arch.d_ffn; ++u)
            units.push_back({scores.ffn_scores[l][u], 0, l, u, chan_cost});
        for (std::size_t a = 0; a < arch.heads; ++a)
            units.push_back({scores.head_scores[l][a], 1, l, a, head_cost});
    }
    std::stable_sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) {
        return std::tie(a.importance, a.kind, a.layer, a.index) <
               std::tie(b.importance, b.kind, b.layer, b.index);
    });

    const double total = model_flops(arch, seq_len);
    const double budget = (1.0 - target_ratio) * total;
    double retained = total;
    std::size_t heads_left = arch.layers * arch.heads;

    StructuredMask mask = StructuredMask::all_ones(arch);
    for (const Unit& u : units) {
        if (retained <= budget) break;
        if (u.kind == 1) {
            if (heads_left == 1) continue;  // keep the model attentive somewhere
            mask.head_bits[u.layer][u.index] = 0;
            --heads_left;
        } else {
            mask.ffn_bits[u.layer][u.index] = 0;
        }
        retained -= u.flops;
    }
    if (retained > budget)
        throw std::runtime_error("select_mask: budget unreachable; removing every removable unit "
                                 "still retains " +
                                 std::to_string(retained / total) + " of FLOPs");
    return mask;
}

inline DecoderModel apply_mask(const DecoderModel& model, const StructuredMask& mask) {
    mask.validate_bits();
    // the mask must address the model's live per-layer dims (equal to the
    // arch for an uncompacted model)
    check_gates(model, GateSet::from_mask(mask));
    DecoderModel out = model;
    out.active_mask = mask;
    return out;
}

// Physically deletes pruned head slices and FFN channels. The result has
// an all-ones mask over its reduced per-layer dims and computes the same
// function as the masked model: dropped units contributed exact zeros,
// so removing their slices leaves every remaining arithmetic step intact.
inline DecoderModel compact(const DecoderModel& model, const StructuredMask& mask) {
    mask.validate_bits();
    {
        GateSet probe = GateSet::from_mask(mask);
        check_gates(model, probe);
    }
    const std::size_t hd = model.head_dim();
    const std::size_t d = model.arch.d_model;

    DecoderModel out = model;
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const LayerWeights& src = model.layers[li];
        LayerWeights& dst = out.layers[li];

        std::vector<std::size_t> keep_heads, keep_ffn;
        for (std::size_t a = 0; a < src.heads; ++a)
            if (mask.head_bits[li][a]) keep_heads.push_back(a);
        for (std::size_t u = 0; u < src.d_ffn; ++u)
            if (mask.ffn_bits[li][u]) keep_ffn.push_back(u);

        dst.heads = keep_heads.size();
        dst.d_ffn = keep_ffn.size();
        const std::size_t new_width = dst.heads * hd;

        dst.w_q = Matrix(new_width, d);
        dst.w_k = Matrix(new_width, d);
        dst.w_v = Matrix(new_width, d);
        dst.w_o = Matrix(d, new_width);
        for (std::size_t ai = 0; ai < keep_heads.size(); ++ai) {
            const std::size_t so = keep_heads[ai] * hd;
            const std::size_t to = ai * hd;
            for (std::size_t j = 0; j < hd; ++j) {
                for (std::size_t c = 0; c < d; ++c) {
                    dst.w_q.at(to + j, c) = src.w_q.at(so + j, c);
                    dst.w_k.at(to + j, c) = src.w_k.at(so + j, c);
                    dst.w_v.at(to + j, c) = src.w_v.at(so + j, c);
                    dst.w_o.at(c, to + j) = src.w_o.at(c, so + j);
                }
            }
        }

        dst.ffn_in = Matrix(dst.d_ffn, d);
        dst.ffn_out = Matrix(d, dst.d_ffn);
        for (std::size_t ui = 0; ui < keep_ffn.size(); ++ui) {
            for (std::size_t c = 0; c < d; ++c) {
                dst.ffn_in.at(ui, c) = src.ffn_in.at(keep_ffn[ui], c);
                dst.ffn_out.at(c, ui) = src.ffn_out.at(c, keep_ffn[ui]);
            }
        }
    }

    out.active_mask.head_bits.clear();
    out.active_mask.ffn_bits.clear();
    for (const auto& l : out.layers) {
        out.active_mask.head_bits.emplace_back(l.heads, 1);
        out.active_mask.ffn_bits.emplace_back(l.d_ffn, 1);
    }
    return out;
}

}  // namespace sap
