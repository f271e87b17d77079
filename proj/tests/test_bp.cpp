#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sap/bp.hpp"
#include "sap/catalog.hpp"
#include "sap/channel.hpp"
#include "sap/rng.hpp"

using namespace sap;

TEST_CASE("channel llr arithmetic") {
    auto llr = channel_llr({1.0, 0.0, -0.5}, 1.0);
    REQUIRE(llr[0] == 2.0);
    REQUIRE(llr[1] == 0.0);
    REQUIRE(llr[2] == -1.0);

    // Doubling sigma divides every llr by exactly four.
    std::vector<double> y = {0.3, -1.7, 2.2, 0.0};
    auto l1 = channel_llr(y, 1.0);
    auto l2 = channel_llr(y, 2.0);
    for (std::size_t j = 0; j < y.size(); ++j) REQUIRE(l2[j] == l1[j] / 4.0);

    REQUIRE_THROWS_AS(channel_llr(y, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(channel_llr(y, -1.0), std::invalid_argument);
}

TEST_CASE("noiseless input converges immediately") {
    const auto& code = catalog_get("HAMMING_7_4");
    const auto gen = systematic_generator(code.pcm());
    const auto x = encode(gen, {1, 0, 1, 1});
    const auto llr = channel_llr(modulate_bpsk(x), 1.0);

    auto res = bp_decode(code.pcm(), llr);
    REQUIRE(res.converged);
    REQUIRE(res.iters_used == 1);
    REQUIRE(res.xhat == x);

    BpConfig no_stop;
    no_stop.early_stop = false;
    no_stop.max_iters = 7;
    auto full = bp_decode(code.pcm(), llr, no_stop);
    REQUIRE(full.converged);
    REQUIRE(full.iters_used == 7);
    REQUIRE(full.xhat == x);
}

TEST_CASE("single flips are always corrected") {
    const auto& code = catalog_get("HAMMING_7_4");
    const auto gen = systematic_generator(code.pcm());
    for (const auto& msg : {std::vector<std::uint8_t>{0, 0, 0, 0},
                            std::vector<std::uint8_t>{1, 1, 0, 1}}) {
        const auto x = encode(gen, msg);
        const auto clean = modulate_bpsk(x);
        for (std::size_t flip = 0; flip < clean.size(); ++flip) {
            auto y = clean;
            y[flip] = -y[flip];
            auto res = bp_decode(code.pcm(), channel_llr(y, 1.0));
            INFO("flip position " << flip);
            REQUIRE(res.converged);
            REQUIRE(res.iters_used <= 50);
            REQUIRE(res.xhat == x);
        }
    }
}

TEST_CASE("convergence always means a zero syndrome") {
    const auto& code = catalog_get("LDPC_12_6");
    Rng rng = derive_rng(17, "bp-noise", {});
    std::size_t converged_seen = 0, failed_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> y(code.pcm().bit_count());
        for (auto& v : y) v = 1.0 + 1.2 * rng.next_gaussian();
        auto res = bp_decode(code.pcm(), channel_llr(y, 1.2));
        if (res.converged) {
            ++converged_seen;
            REQUIRE(syndrome_is_zero(code.pcm(), res.xhat));
        } else {
            ++failed_seen;
            REQUIRE(res.iters_used == 50);
        }
    }
    REQUIRE(converged_seen > 0);  // the probe exercises both paths
    REQUIRE(failed_seen > 0);
}

TEST_CASE("decoding commutes with variable relabeling") {
    const auto& code = catalog_get("HAMMING_7_4");
    const std::vector<std::size_t> perm = {3, 5, 0, 6, 1, 4, 2};
    const auto hp = permute_columns(code.pcm(), perm);

    Rng rng = derive_rng(23, "bp-perm", {});
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> y(7);
        for (auto& v : y) v = 1.0 + 0.8 * rng.next_gaussian();
        const auto llr = channel_llr(y, 0.8);
        std::vector<double> llr_p(7);
        for (std::size_t j = 0; j < 7; ++j) llr_p[perm[j]] = llr[j];

        auto base = bp_decode(code.pcm(), llr);
        auto moved = bp_decode(hp, llr_p);
        REQUIRE(base.converged == moved.converged);
        for (std::size_t j = 0; j < 7; ++j) REQUIRE(moved.xhat[perm[j]] == base.xhat[j]);
    }
}

TEST_CASE("decoding is deterministic") {
    const auto& code = catalog_get("LDPC_24_12");
    Rng rng = derive_rng(29, "bp-det", {});
    std::vector<double> y(code.pcm().bit_count());
    for (auto& v : y) v = 1.0 + rng.next_gaussian();
    const auto llr = channel_llr(y, 1.0);
    auto a = bp_decode(code.pcm(), llr);
    auto b = bp_decode(code.pcm(), llr);
    REQUIRE(a.xhat == b.xhat);
    REQUIRE(a.converged == b.converged);
    REQUIRE(a.iters_used == b.iters_used);
}

TEST_CASE("bp input validation") {
    const auto& code = catalog_get("HAMMING_7_4");
    try {
        bp_decode(code.pcm(), std::vector<double>(5, 0.0));
        FAIL("expected length mismatch");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        REQUIRE(msg.find("5") != std::string::npos);
        REQUIRE(msg.find("7") != std::string::npos);
    }
    BpConfig bad;
    bad.max_iters = 0;
    REQUIRE_THROWS_AS(bp_decode(code.pcm(), std::vector<double>(7, 1.0), bad),
                      std::invalid_argument);
}
