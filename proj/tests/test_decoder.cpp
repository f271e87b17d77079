#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sap/catalog.hpp"
#include "sap/decoder.hpp"
#include "sap/train.hpp"

using namespace sap;

namespace {

ParityCheckMatrix tiny_h11() {
    return ParityCheckMatrix::from_rows({{1, 1}});
}

DecoderArchitecture small_arch(std::size_t layers = 1, std::size_t heads = 2,
                               std::size_t d_model = 4, std::size_t d_ffn = 6) {
    DecoderArchitecture a;
    a.layers = layers;
    a.heads = heads;
    a.d_model = d_model;
    a.d_ffn = d_ffn;
    return a;
}

double grad_l2(DecoderModel& grads) {
    double s = 0.0;
    for (const auto& r : tensor_refs(grads))
        for (std::size_t i = 0; i < r.size; ++i) s += r.data[i] * r.data[i];
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("attention mask allows exactly the one-hop tanner neighborhood") {
    SECTION("single check joins everything") {
        auto allow = build_attention_mask(tiny_h11());
        REQUIRE(allow.size() == 9);
        for (std::uint8_t b : allow) REQUIRE(b == 1);
    }
    SECTION("variables sharing no check stay separated") {
        auto h = ParityCheckMatrix::from_rows({{1, 0, 0}, {0, 1, 0}});
        auto allow = build_attention_mask(h);
        const std::size_t s = 5;
        auto at = [&](std::size_t i, std::size_t j) { return allow[i * s + j]; };
        for (std::size_t i = 0; i < s; ++i) REQUIRE(at(i, i) == 1);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j) REQUIRE(at(i, j) == at(j, i));
        REQUIRE(at(0, 1) == 0);  // no shared check
        REQUIRE(at(0, 3) == 1);  // var0 to its check
        REQUIRE(at(1, 4) == 1);
        REQUIRE(at(1, 3) == 0);
        REQUIRE(at(3, 4) == 0);  // checks sharing no variable
        for (std::size_t j = 0; j < s; ++j)
            if (j != 2) REQUIRE(at(2, j) == 0);  // isolated variable
    }
}

TEST_CASE("tokenize concatenates magnitudes with signed syndrome flags") {
    const LinearCode& code = catalog_get("HAMMING_7_4");
    const auto& pcm = code.pcm();

    SECTION("clean transmission gives all-positive syndrome tokens") {
        std::vector<std::uint8_t> msg{1, 0, 1, 1};
        const auto cw = code.encode_message(msg);
        const auto y = modulate_bpsk(cw);
        const auto tok = tokenize(pcm, y);
        REQUIRE(tok.size() == 10);
        for (std::size_t i = 0; i < 7; ++i) REQUIRE(tok[i] == 1.0);
        for (std::size_t i = 7; i < 10; ++i) REQUIRE(tok[i] == 1.0);
    }

    SECTION("a single flip lights up that column of the parity matrix") {
        for (std::size_t j = 0; j < 7; ++j) {
            auto y = modulate_bpsk(std::vector<std::uint8_t>(7, 0));
            y[j] = -y[j];
            const auto tok = tokenize(pcm, y);
            for (std::size_t r = 0; r < 3; ++r)
                REQUIRE(tok[7 + r] == (pcm.get(r, j) ? -1.0 : 1.0));
        }
    }

    SECTION("tokens ignore which codeword carried the noise") {
        Rng rng = derive_rng(11, "token-invariance", {});
        Vector z(7);
        for (auto& v : z) v = 1.0 + 0.8 * rng.next_gaussian();
        const auto base = tokenize(pcm, z);
        for (std::uint64_t msg = 0; msg < 16; ++msg) {
            std::vector<std::uint8_t> m(4);
            for (int i = 0; i < 4; ++i) m[i] = (msg >> i) & 1;
            const auto x = modulate_bpsk(code.encode_message(m));
            Vector y(7);
            for (std::size_t i = 0; i < 7; ++i) y[i] = x[i] * z[i];
            REQUIRE(tokenize(pcm, y) == base);
        }
    }

    SECTION("length mismatch rejected") {
        REQUIRE_THROWS_AS(tokenize(pcm, Vector{1.0, 2.0}), std::invalid_argument);
    }
}

TEST_CASE("zeroed weights produce exactly zero logits") {
    auto model = zero_like(make_decoder(small_arch(2, 2, 8, 8), 3));
    const LinearCode& code = catalog_get("HAMMING_7_4");
    CodeContext ctx(code.pcm());
    Rng rng = derive_rng(4, "zero-probe", {});
    Vector y(7);
    for (auto& v : y) v = 1.0 + rng.next_gaussian();
    const auto logits = forward(model, ctx, tokenize(code.pcm(), y));
    REQUIRE(logits.size() == 7);
    for (double l : logits) REQUIRE(l == 0.0);
    REQUIRE_THAT(bce_loss(logits, std::vector<std::uint8_t>(7, 0)),
                 Catch::Matchers::WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("forward is deterministic") {
    auto model = make_decoder(small_arch(), 9);
    const auto h = tiny_h11();
    CodeContext ctx(h);
    const auto tok = tokenize(*ctx.pcm, {0.4, -1.7});
    const auto a = forward(model, ctx, tok);
    const auto b = forward(model, ctx, tok);
    REQUIRE(a == b);
}

TEST_CASE("gating a head equals zeroing its output projection columns") {
    auto arch = small_arch(1, 2, 8, 6);
    const LinearCode& code = catalog_get("HAMMING_7_4");
    CodeContext ctx(code.pcm());

    auto gated = make_decoder(arch, 21);
    gated.active_mask.head_bits[0][1] = 0;
    gated.active_mask.ffn_bits[0][2] = 0;

    auto zeroed = make_decoder(arch, 21);
    const std::size_t hd = arch.head_dim();
    for (std::size_t r = 0; r < arch.d_model; ++r)
        for (std::size_t c = hd; c < 2 * hd; ++c) zeroed.layers[0].w_o.at(r, c) = 0.0;
    for (std::size_t r = 0; r < arch.d_model; ++r) zeroed.layers[0].ffn_out.at(r, 2) = 0.0;

    Rng rng = derive_rng(8, "gate-probe", {});
    for (int trial = 0; trial < 5; ++trial) {
        Vector y(7);
        for (auto& v : y) v = 1.0 + 0.7 * rng.next_gaussian();
        const auto tok = tokenize(code.pcm(), y);
        const auto a = forward(gated, ctx, tok);
        const auto b = forward(zeroed, ctx, tok);
        for (std::size_t j = 0; j < a.size(); ++j)
            REQUIRE_THAT(a[j], Catch::Matchers::WithinAbs(b[j], 1e-12));
    }
}

TEST_CASE("interchangeable variables give interchangeable logits") {
    auto model = make_decoder(small_arch(1, 2, 4, 4), 5);
    const auto h11 = tiny_h11();
    CodeContext ctx(h11);
    const Vector y{0.7, -1.3};
    const Vector yswap{-1.3, 0.7};
    const auto a = forward(model, ctx, tokenize(*ctx.pcm, y));
    const auto b = forward(model, ctx, tokenize(*ctx.pcm, yswap));
    REQUIRE_THAT(a[0], Catch::Matchers::WithinAbs(b[1], 1e-12));
    REQUIRE_THAT(a[1], Catch::Matchers::WithinAbs(b[0], 1e-12));
}

TEST_CASE("decode flips hard decisions where the logit is positive") {
    auto h = ParityCheckMatrix::from_rows({{1, 1, 0}, {0, 1, 1}});
    const Vector y{0.5, -0.5, 0.3};
    const Vector logits{1.0, -1.0, 2.0};
    REQUIRE(decode_bits(h, y, logits) == std::vector<std::uint8_t>{1, 1, 1});
    REQUIRE(decode_bits(h, y, {0.0, 0.0, 0.0}) == hard_decision(y));
    REQUIRE_THROWS_AS(decode_bits(h, {1.0, 2.0}, logits), std::invalid_argument);
}

TEST_CASE("bce loss oracle values") {
    REQUIRE_THAT(bce_loss({0.0}, {0}), Catch::Matchers::WithinAbs(std::log(2.0), 1e-15));
    REQUIRE_THAT(bce_loss({0.0}, {1}), Catch::Matchers::WithinAbs(std::log(2.0), 1e-15));
    REQUIRE_THAT(bce_loss({0.0, 0.0}, {1, 0}), Catch::Matchers::WithinAbs(std::log(2.0), 1e-15));
    REQUIRE(bce_loss({40.0}, {1}) < 1e-8);
    REQUIRE(bce_loss({-40.0}, {0}) < 1e-8);
    REQUIRE(bce_loss({-40.0}, {1}) > 30.0);
    REQUIRE_THROWS_AS(bce_loss({0.0}, {0, 1}), std::invalid_argument);

    const auto g = bce_loss_grad({0.0, 0.0}, {1, 0});
    REQUIRE_THAT(g[0], Catch::Matchers::WithinAbs(-0.25, 1e-15));
    REQUIRE_THAT(g[1], Catch::Matchers::WithinAbs(0.25, 1e-15));
}

TEST_CASE("analytic gradients agree with central differences") {
    auto model = make_decoder(small_arch(1, 2, 4, 6), 13);
    const auto h11 = tiny_h11();
    CodeContext ctx(h11);
    const auto tokens = tokenize(*ctx.pcm, {0.9, -1.1});
    const std::vector<std::uint8_t> targets{1, 0};

    DecoderModel grads = zero_like(model);
    detail::ForwardCache cache;
    const auto logits = forward(model, ctx, tokens, &cache);
    backward(model, ctx, cache, tokens, bce_loss_grad(logits, targets), grads);

    auto params = tensor_refs(model);
    auto grefs = tensor_refs(grads);
    const double h = 1e-4;
    double worst = 0.0;
    for (std::size_t t = 0; t < params.size(); ++t) {
        for (std::size_t i = 0; i < params[t].size; ++i) {
            double& p = params[t].data[i];
            const double saved = p;
            p = saved + h;
            const double up = bce_loss(forward(model, ctx, tokens), targets);
            p = saved - h;
            const double dn = bce_loss(forward(model, ctx, tokens), targets);
            p = saved;
            const double fd = (up - dn) / (2.0 * h);
            const double ana = grefs[t].data[i];
            const double rel = std::abs(fd - ana) / std::max({std::abs(fd), std::abs(ana), 1e-4});
            worst = std::max(worst, rel);
        }
    }
    INFO("worst relative gradient error " << worst);
    REQUIRE(worst < 1e-4);
}

TEST_CASE("saturated correct predictions stop producing gradient") {
    auto model = make_decoder(small_arch(1, 2, 8, 8), 17);
    const LinearCode& code = catalog_get("HAMMING_7_4");
    CodeContext ctx(code.pcm());
    Rng rng = derive_rng(2, "saturation-probe", {});
    Vector y(7);
    for (auto& v : y) v = 1.0 + 0.5 * rng.next_gaussian();
    const auto tokens = tokenize(code.pcm(), y);

    auto logits = forward(model, ctx, tokens);
    double small = 1e9;
    for (double l : logits) small = std::min(small, std::abs(l));
    REQUIRE(small > 1e-4);  // seed chosen so no logit sits at zero
    const double scale = 60.0 / small;
    for (double& w : model.out_w) w *= scale;
    model.out_b *= scale;

    logits = forward(model, ctx, tokens);
    std::vector<std::uint8_t> agree(7);
    for (std::size_t j = 0; j < 7; ++j) {
        REQUIRE(std::abs(logits[j]) >= 40.0);
        agree[j] = logits[j] > 0.0 ? 1 : 0;
    }

    DecoderModel grads = zero_like(model);
    detail::ForwardCache cache;
    forward(model, ctx, tokens, &cache);
    backward(model, ctx, cache, tokens, bce_loss_grad(logits, agree), grads);
    REQUIRE(grad_l2(grads) < 1e-6);
}

TEST_CASE("gated-off units receive exactly zero parameter gradient") {
    auto arch = small_arch(1, 2, 8, 4);
    auto model = make_decoder(arch, 23);
    model.active_mask.head_bits[0][1] = 0;
    model.active_mask.ffn_bits[0][2] = 0;
    const LinearCode& code = catalog_get("HAMMING_7_4");
    CodeContext ctx(code.pcm());
    Rng rng = derive_rng(6, "masked-grad", {});
    Vector y(7);
    for (auto& v : y) v = 1.0 + 0.9 * rng.next_gaussian();
    const auto tokens = tokenize(code.pcm(), y);

    DecoderModel grads = zero_like(model);
    detail::ForwardCache cache;
    const auto logits = forward(model, ctx, tokens, &cache);
    backward(model, ctx, cache, tokens, bce_loss_grad(logits, {1, 0, 0, 1, 0, 1, 0}), grads);

    const std::size_t hd = arch.head_dim();
    const auto& g = grads.layers[0];
    for (std::size_t r = hd; r < 2 * hd; ++r)
        for (std::size_t c = 0; c < arch.d_model; ++c) {
            REQUIRE(g.w_q.at(r, c) == 0.0);
            REQUIRE(g.w_k.at(r, c) == 0.0);
            REQUIRE(g.w_v.at(r, c) == 0.0);
        }
    for (std::size_t r = 0; r < arch.d_model; ++r)
        for (std::size_t c = hd; c < 2 * hd; ++c) REQUIRE(g.w_o.at(r, c) == 0.0);
    for (std::size_t c = 0; c < arch.d_model; ++c) REQUIRE(g.ffn_in.at(2, c) == 0.0);
    for (std::size_t r = 0; r < arch.d_model; ++r) REQUIRE(g.ffn_out.at(r, 2) == 0.0);

    // The live units still learn.
    double live = 0.0;
    for (std::size_t c = 0; c < arch.d_model; ++c) live += std::abs(g.w_q.at(0, c));
    REQUIRE(live > 0.0);
}

TEST_CASE("gate shape mismatches are rejected") {
    auto model = make_decoder(small_arch(), 1);
    const auto h11 = tiny_h11();
    CodeContext ctx(h11);
    const auto tokens = tokenize(*ctx.pcm, {1.0, -1.0});
    GateSet gates = GateSet::from_mask(model.active_mask);
    gates.head[0].pop_back();
    REQUIRE_THROWS_AS(forward_gated(model, ctx, tokens, gates), std::invalid_argument);
}

TEST_CASE("decoder adapter matches the manual pipeline") {
    auto model = make_decoder(small_arch(2, 2, 8, 8), 31);
    const LinearCode& code = catalog_get("HAMMING_7_4");
    auto dec = neural_decoder(model, code);
    CodeContext ctx(code.pcm());
    Rng rng = derive_rng(3, "adapter-probe", {});
    for (int trial = 0; trial < 3; ++trial) {
        Vector y(7);
        for (auto& v : y) v = 1.0 + rng.next_gaussian();
        const auto logits = forward(model, ctx, tokenize(code.pcm(), y));
        REQUIRE(dec(y, 0.8) == decode_bits(code.pcm(), y, logits));
    }
}

TEST_CASE("cosine schedule hits both endpoints exactly") {
    REQUIRE(cosine_lr(0, 2000, 1e-3, 1e-5) == 1e-3);
    REQUIRE(cosine_lr(1999, 2000, 1e-3, 1e-5) == 1e-5);
    REQUIRE(cosine_lr(0, 1, 1e-3, 1e-5) == 1e-3);
    const double mid = cosine_lr(500, 1001, 1e-3, 1e-5);
    REQUIRE_THAT(mid, Catch::Matchers::WithinRel(0.5 * (1e-3 + 1e-5), 1e-12));
    for (std::size_t s = 1; s < 50; ++s)
        REQUIRE(cosine_lr(s, 50, 1e-3, 1e-5) <= cosine_lr(s - 1, 50, 1e-3, 1e-5));
}
