#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sap/catalog.hpp"
#include "sap/pruning.hpp"

using namespace sap;

namespace {

DecoderArchitecture arch_of(std::size_t L, std::size_t h, std::size_t d, std::size_t f) {
    DecoderArchitecture a;
    a.layers = L;
    a.heads = h;
    a.d_model = d;
    a.d_ffn = f;
    return a;
}

ImportanceScores scores_of(const DecoderArchitecture& arch, double fill = 1.0) {
    ImportanceScores s;
    s.head_scores.assign(arch.layers, Vector(arch.heads, fill));
    s.ffn_scores.assign(arch.layers, Vector(arch.d_ffn, fill));
    return s;
}

}  // namespace

TEST_CASE("a head with a zeroed output slice scores exactly zero") {
    auto arch = arch_of(1, 2, 8, 4);
    auto model = make_decoder(arch, 37);
    const std::size_t hd = arch.head_dim();
    for (std::size_t r = 0; r < arch.d_model; ++r)
        for (std::size_t c = hd; c < 2 * hd; ++c) model.layers[0].w_o.at(r, c) = 0.0;
    for (std::size_t r = 0; r < arch.d_model; ++r) model.layers[0].ffn_out.at(r, 1) = 0.0;

    const LinearCode& code = catalog_get("HAMMING_7_4");
    CalibConfig calib;
    calib.frames = 4;
    calib.seed = 5;
    auto scores = fisher_importance(model, code, calib);
    REQUIRE(scores.calib_frames == 4);
    REQUIRE(scores.calib_seed == 5);
    REQUIRE(scores.head_scores[0][1] == 0.0);
    REQUIRE(scores.ffn_scores[0][1] == 0.0);
    REQUIRE(scores.head_scores[0][0] > 0.0);
    for (const auto& v : scores.ffn_scores)
        for (double x : v) {
            REQUIRE(x >= 0.0);
            REQUIRE(std::isfinite(x));
        }
}

TEST_CASE("fisher scores match a finite-difference probe of the gates") {
    auto arch = arch_of(1, 2, 8, 4);
    auto model = make_decoder(arch, 41);
    const LinearCode& code = catalog_get("HAMMING_7_4");
    CalibConfig calib;
    calib.frames = 6;
    calib.seed = 99;
    auto scores = fisher_importance(model, code, calib);

    CodeContext ctx(code.pcm());
    ImportanceScores ref = scores_of(arch, 0.0);
    const double h = 1e-5;
    for (std::uint64_t frame = 0; frame < calib.frames; ++frame) {
        Rng rng = derive_rng(calib.seed, "fisher", {frame});
        TrainSample s =
            draw_train_sample(ctx, code.rate(), calib.snr_low_db, calib.snr_high_db, rng);
        auto probe = [&](GateSet g) {
            return bce_loss(forward_gated(model, ctx, s.tokens, g), s.flip_targets);
        };
        GateSet ones;
        ones.head.assign(1, Vector(arch.heads, 1.0));
        ones.ffn.assign(1, Vector(arch.d_ffn, 1.0));
        for (std::size_t a = 0; a < arch.heads; ++a) {
            GateSet up = ones, dn = ones;
            up.head[0][a] = 1.0 + h;
            dn.head[0][a] = 1.0 - h;
            const double fd = (probe(up) - probe(dn)) / (2.0 * h);
            ref.head_scores[0][a] += fd * fd;
        }
        for (std::size_t u = 0; u < arch.d_ffn; ++u) {
            GateSet up = ones, dn = ones;
            up.ffn[0][u] = 1.0 + h;
            dn.ffn[0][u] = 1.0 - h;
            const double fd = (probe(up) - probe(dn)) / (2.0 * h);
            ref.ffn_scores[0][u] += fd * fd;
        }
    }
    for (std::size_t a = 0; a < arch.heads; ++a) {
        INFO("head " << a);
        REQUIRE_THAT(scores.head_scores[0][a],
                     Catch::Matchers::WithinRel(ref.head_scores[0][a], 1e-5) ||
                         Catch::Matchers::WithinAbs(ref.head_scores[0][a], 1e-10));
    }
    for (std::size_t u = 0; u < arch.d_ffn; ++u) {
        INFO("channel " << u);
        REQUIRE_THAT(scores.ffn_scores[0][u],
                     Catch::Matchers::WithinRel(ref.ffn_scores[0][u], 1e-5) ||
                         Catch::Matchers::WithinAbs(ref.ffn_scores[0][u], 1e-10));
    }
}

TEST_CASE("doubling the loss gradient doubles gate gradients exactly") {
    auto arch = arch_of(1, 2, 8, 4);
    auto model = make_decoder(arch, 43);
    const LinearCode& code = catalog_get("HAMMING_7_4");
    CodeContext ctx(code.pcm());
    Rng rng = derive_rng(7, "scale-probe", {});
    Vector y(7);
    for (auto& v : y) v = 1.0 + 0.6 * rng.next_gaussian();
    const auto tokens = tokenize(code.pcm(), y);

    GateSet gates = GateSet::from_mask(model.active_mask);
    detail::ForwardCache cache;
    const auto logits = forward_gated(model, ctx, tokens, gates, &cache);
    Vector dl = bce_loss_grad(logits, {0, 1, 0, 0, 1, 0, 1});
    Vector dl2 = dl;
    for (double& g : dl2) g *= 2.0;

    DecoderModel sink = zero_like(model);
    GateGrads g1 = GateGrads::zeros_like(model);
    backward_gated(model, ctx, cache, tokens, dl, gates, sink, &g1);
    DecoderModel sink2 = zero_like(model);
    GateGrads g2 = GateGrads::zeros_like(model);
    backward_gated(model, ctx, cache, tokens, dl2, gates, sink2, &g2);

    for (std::size_t a = 0; a < arch.heads; ++a) REQUIRE(g2.head[0][a] == 2.0 * g1.head[0][a]);
    for (std::size_t u = 0; u < arch.d_ffn; ++u) REQUIRE(g2.ffn[0][u] == 2.0 * g1.ffn[0][u]);
}

TEST_CASE("zero target keeps everything") {
    auto arch = arch_of(2, 4, 16, 8);
    auto mask = select_mask(scores_of(arch), arch, 10, 0.0);
    REQUIRE(mask == StructuredMask::all_ones(arch));
}

TEST_CASE("greedy removes ascending importance until the budget is met") {
    // One head (528 flops at S=3) plus four channels (48 each): total 720.
    // Budget 0.9*720=648, so the two cheapest-importance channels go.
    auto arch = arch_of(1, 1, 4, 4);
    ImportanceScores s = scores_of(arch);
    s.head_scores[0] = {5.0};
    s.ffn_scores[0] = {3.0, 1.0, 4.0, 2.0};
    auto mask = select_mask(s, arch, 3, 0.1);
    REQUIRE(mask.head_bits[0] == std::vector<std::uint8_t>{1});
    REQUIRE(mask.ffn_bits[0] == std::vector<std::uint8_t>{1, 0, 1, 0});
    const double ratio = 1.0 - masked_flops(arch, mask, 3) / model_flops(arch, 3);
    REQUIRE_THAT(ratio, Catch::Matchers::WithinAbs(96.0 / 720.0, 1e-12));
}

TEST_CASE("importance ties fall to ffn channels before heads") {
    auto arch = arch_of(1, 2, 4, 2);
    ImportanceScores s = scores_of(arch);
    s.head_scores[0] = {0.0, 10.0};
    s.ffn_scores[0] = {0.0, 10.0};
    // Remove exactly one unit; both zero-importance units are candidates.
    const double total = model_flops(arch, 3);
    const double chan = per_ffn_channel_flops(arch.d_model, 3);
    auto mask = select_mask(s, arch, 3, 0.5 * chan / total);
    REQUIRE(mask.ffn_bits[0] == std::vector<std::uint8_t>{0, 1});
    REQUIRE(mask.head_bits[0] == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("budget compliance and greedy prefix monotonicity") {
    auto arch = arch_of(2, 4, 16, 12);
    const std::size_t S = 10;
    ImportanceScores s = scores_of(arch);
    Rng rng = derive_rng(17, "select-probe", {});
    for (auto& v : s.head_scores)
        for (double& x : v) x = rng.next_uniform(0.0, 1.0);
    for (auto& v : s.ffn_scores)
        for (double& x : v) x = rng.next_uniform(0.0, 1.0);

    const double total = model_flops(arch, S);
    const double max_unit =
        std::max(per_head_flops(arch.d_model, arch.head_dim(), S),
                 per_ffn_channel_flops(arch.d_model, S));
    StructuredMask prev = StructuredMask::all_ones(arch);
    for (double target : {0.1, 0.2, 0.4, 0.6, 0.8}) {
        auto mask = select_mask(s, arch, S, target);
        const double achieved = 1.0 - masked_flops(arch, mask, S) / total;
        INFO("target " << target << " achieved " << achieved);
        REQUIRE(achieved >= target);
        REQUIRE(achieved <= target + max_unit / total + 1e-12);

        // Anything the lower ratio removed stays removed at the higher one.
        for (std::size_t l = 0; l < arch.layers; ++l) {
            for (std::size_t a = 0; a < arch.heads; ++a)
                REQUIRE(mask.head_bits[l][a] <= prev.head_bits[l][a]);
            for (std::size_t u = 0; u < arch.d_ffn; ++u)
                REQUIRE(mask.ffn_bits[l][u] <= prev.ffn_bits[l][u]);
        }
        prev = mask;

        // Same inputs, same mask.
        REQUIRE(select_mask(s, arch, S, target) == mask);
    }
}

TEST_CASE("the final head survives and impossible budgets error out") {
    auto arch = arch_of(1, 1, 4, 2);  // head 528, channels 96: max removable 13.3%
    ImportanceScores s = scores_of(arch);
    auto mask = select_mask(s, arch, 3, 0.15);
    REQUIRE(mask.head_bits[0] == std::vector<std::uint8_t>{1});
    REQUIRE(mask.ffn_bits[0] == std::vector<std::uint8_t>{0, 0});

    REQUIRE_THROWS_AS(select_mask(s, arch, 3, 0.4), std::runtime_error);

    auto arch2 = arch_of(1, 2, 4, 1);
    REQUIRE_THROWS_AS(select_mask(scores_of(arch2), arch2, 3, 0.99), std::runtime_error);

    REQUIRE_THROWS_AS(select_mask(s, arch, 3, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(select_mask(s, arch, 3, -0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(select_mask(scores_of(arch2), arch, 3, 0.1), std::invalid_argument);
}

TEST_CASE("applying a mask is reversible and bit-exact for all-ones") {
    auto arch = arch_of(2, 2, 8, 8);
    auto model = make_decoder(arch, 53);
    const LinearCode& code = catalog_get("HAMMING_7_4");
    CodeContext ctx(code.pcm());
    Rng rng = derive_rng(12, "apply-probe", {});
    Vector y(7);
    for (auto& v : y) v = 1.0 + 0.8 * rng.next_gaussian();
    const auto tokens = tokenize(code.pcm(), y);
    const auto base = forward(model, ctx, tokens);

    REQUIRE(forward(apply_mask(model, StructuredMask::all_ones(arch)), ctx, tokens) == base);

    StructuredMask m = StructuredMask::all_ones(arch);
    m.head_bits[0][0] = 0;
    m.ffn_bits[1][3] = 0;
    auto masked = apply_mask(model, m);
    REQUIRE(forward(masked, ctx, tokens) != base);
    REQUIRE(forward(apply_mask(masked, StructuredMask::all_ones(arch)), ctx, tokens) == base);

    StructuredMask wrong = StructuredMask::all_ones(arch_of(1, 2, 8, 8));
    REQUIRE_THROWS_AS(apply_mask(model, wrong), std::invalid_argument);
}

TEST_CASE("a fully headless layer passes the residual stream through") {
    auto arch = arch_of(2, 2, 8, 8);
    auto model = make_decoder(arch, 59);
    StructuredMask m = StructuredMask::all_ones(arch);
    m.head_bits[0] = {0, 0};

    auto zeroed = model;
    std::fill(zeroed.layers[0].w_o.data.begin(), zeroed.layers[0].w_o.data.end(), 0.0);

    const LinearCode& code = catalog_get("HAMMING_7_4");
    CodeContext ctx(code.pcm());
    Rng rng = derive_rng(13, "headless-probe", {});
    for (int t = 0; t < 3; ++t) {
        Vector y(7);
        for (auto& v : y) v = 1.0 + 0.8 * rng.next_gaussian();
        const auto tokens = tokenize(code.pcm(), y);
        const auto a = forward(apply_mask(model, m), ctx, tokens);
        const auto b = forward(zeroed, ctx, tokens);
        for (std::size_t j = 0; j < a.size(); ++j)
            REQUIRE_THAT(a[j], Catch::Matchers::WithinAbs(b[j], 1e-12));
    }
}

TEST_CASE("compaction drops exactly the pruned slices") {
    auto arch = arch_of(1, 2, 8, 6);
    auto model = make_decoder(arch, 61);

    SECTION("all-ones keeps everything") {
        auto same = compact(model, StructuredMask::all_ones(arch));
        REQUIRE(same.param_count() == model.param_count());
        const LinearCode& code = catalog_get("HAMMING_7_4");
        CodeContext ctx(code.pcm());
        const auto tokens = tokenize(code.pcm(), {1, -1, 1, 1, -1, 1, 1});
        REQUIRE(forward(same, ctx, tokens) == forward(model, ctx, tokens));
    }

    SECTION("one head costs 4 * d_model * head_dim parameters") {
        StructuredMask m = StructuredMask::all_ones(arch);
        m.head_bits[0][1] = 0;
        auto small = compact(model, m);
        REQUIRE(model.param_count() - small.param_count() ==
                4 * arch.d_model * arch.head_dim());
        REQUIRE(small.layers[0].heads == 1);
        REQUIRE(small.active_mask.head_bits[0] == std::vector<std::uint8_t>{1});
    }

    SECTION("one ffn channel costs 2 * d_model parameters") {
        StructuredMask m = StructuredMask::all_ones(arch);
        m.ffn_bits[0][4] = 0;
        auto small = compact(model, m);
        REQUIRE(model.param_count() - small.param_count() == 2 * arch.d_model);
        REQUIRE(small.layers[0].d_ffn == 5);
    }
}

TEST_CASE("masked and compacted models agree to 1e-10 on random inputs") {
    auto arch = arch_of(2, 4, 16, 12);
    auto model = make_decoder(arch, 67);
    StructuredMask m = StructuredMask::all_ones(arch);
    m.head_bits[0] = {1, 0, 0, 1};
    m.head_bits[1] = {0, 1, 1, 0};
    m.ffn_bits[0] = {1, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 1};
    m.ffn_bits[1] = {0, 1, 1, 0, 1, 1, 1, 0, 1, 0, 1, 1};

    auto masked = apply_mask(model, m);
    auto small = compact(model, m);
    REQUIRE(small.param_count() < model.param_count());

    const LinearCode& code = catalog_get("HAMMING_7_4");
    CodeContext ctx(code.pcm());
    Rng rng = derive_rng(29, "compact-probe", {});
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        Vector y(7);
        for (auto& v : y) v = 1.0 + rng.next_gaussian();
        const auto tokens = tokenize(code.pcm(), y);
        const auto a = forward(masked, ctx, tokens);
        const auto b = forward(small, ctx, tokens);
        for (std::size_t j = 0; j < a.size(); ++j)
            worst = std::max(worst, std::abs(a[j] - b[j]));
    }
    INFO("max masked/compacted gap " << worst);
    REQUIRE(worst < 1e-10);
}
