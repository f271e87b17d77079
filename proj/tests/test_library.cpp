#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "sap/catalog.hpp"
#include "sap/json_io.hpp"
#include "sap/library.hpp"

using namespace sap;

namespace {

DecoderArchitecture small_arch() {
    DecoderArchitecture a;
    a.layers = 2;
    a.heads = 2;
    a.d_model = 16;
    a.d_ffn = 8;
    return a;
}

StructuredMask tagged_mask(const DecoderArchitecture& arch, std::size_t drop_head) {
    auto m = StructuredMask::all_ones(arch);
    m.head_bits[0][drop_head] = 0;
    return m;
}

SpectralSignature flat_sig(std::size_t k, double first) {
    SpectralSignature s;
    s.values.assign(k, 0.0);
    s.values[0] = first;
    s.k_used = k;
    s.source_n = 7;
    s.source_k = 4;
    return s;
}

}  // namespace

TEST_CASE("library constructor validates its knobs") {
    auto arch = small_arch();
    REQUIRE_THROWS_AS(MaskLibrary(0, 0.5, 0.1, arch), std::invalid_argument);
    REQUIRE_THROWS_AS(MaskLibrary(6, 0.0, 0.1, arch), std::invalid_argument);
    REQUIRE_THROWS_AS(MaskLibrary(6, 1.5, 0.1, arch), std::invalid_argument);
    REQUIRE_THROWS_AS(MaskLibrary(6, 0.5, 0.0, arch), std::invalid_argument);
    MaskLibrary lib(6, 1.0, 0.1, arch);  // tau = 1 is legal (only exact reuse)
    REQUIRE(lib.k() == 6);
}

TEST_CASE("retrieval picks the nearest signature") {
    auto arch = small_arch();
    MaskLibrary lib(4, 0.5, 0.1, arch);
    lib.append_entry({flat_sig(4, 5.0), tagged_mask(arch, 0), "far", "t0"});
    lib.append_entry({flat_sig(4, 2.0), tagged_mask(arch, 1), "near", "t1"});

    auto hit = lib.retrieve(flat_sig(4, 0.0));
    REQUIRE(hit.index == 1);
    REQUIRE(hit.distance == 2.0);
    REQUIRE_THAT(hit.similarity, Catch::Matchers::WithinRel(std::exp(-0.2), 1e-15));

    // Exact hit: distance 0, similarity 1.
    auto exact = lib.retrieve(flat_sig(4, 5.0));
    REQUIRE(exact.index == 0);
    REQUIRE(exact.distance == 0.0);
    REQUIRE(exact.similarity == 1.0);
}

TEST_CASE("equal distances keep the lower index") {
    auto arch = small_arch();
    MaskLibrary lib(4, 0.5, 0.1, arch);
    lib.append_entry({flat_sig(4, 3.0), tagged_mask(arch, 0), "plus", "t0"});
    lib.append_entry({flat_sig(4, -3.0), tagged_mask(arch, 1), "minus", "t1"});
    auto hit = lib.retrieve(flat_sig(4, 0.0));
    REQUIRE(hit.index == 0);
    REQUIRE(hit.distance == 3.0);
}

TEST_CASE("retrieval error paths") {
    auto arch = small_arch();
    MaskLibrary lib(4, 0.5, 0.1, arch);
    try {
        lib.retrieve(flat_sig(4, 0.0));
        FAIL("expected empty-library error");
    } catch (const std::runtime_error& e) {
        REQUIRE(std::string(e.what()).find("select_or_create") != std::string::npos);
    }

    lib.append_entry({flat_sig(4, 1.0), tagged_mask(arch, 0), "a", "t0"});
    try {
        lib.retrieve(flat_sig(5, 0.0));
        FAIL("expected K mismatch");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        REQUIRE(msg.find("5") != std::string::npos);
        REQUIRE(msg.find("does not match library K 4") != std::string::npos);
    }
}

TEST_CASE("append rejects mismatches and near duplicates") {
    auto arch = small_arch();
    MaskLibrary lib(4, 0.5, 0.1, arch);
    REQUIRE_THROWS_AS(lib.append_entry({flat_sig(3, 1.0), tagged_mask(arch, 0), "a", "t"}),
                      std::invalid_argument);

    DecoderArchitecture other = arch;
    other.heads = 1;
    REQUIRE_THROWS_AS(
        lib.append_entry({flat_sig(4, 1.0), StructuredMask::all_ones(other), "a", "t"}),
        std::invalid_argument);

    auto bad_bits = tagged_mask(arch, 0);
    bad_bits.ffn_bits[1][2] = 7;
    REQUIRE_THROWS_AS(lib.append_entry({flat_sig(4, 1.0), bad_bits, "a", "t"}),
                      std::invalid_argument);

    lib.append_entry({flat_sig(4, 1.0), tagged_mask(arch, 0), "original", "t0"});
    auto dup = flat_sig(4, 1.0);
    dup.values[1] = 1e-13;  // inside the duplicate radius
    try {
        lib.append_entry({dup, tagged_mask(arch, 1), "copycat", "t1"});
        FAIL("expected duplicate rejection");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        REQUIRE(msg.find("duplicate signature") != std::string::npos);
        REQUIRE(msg.find("original") != std::string::npos);
    }
    REQUIRE(lib.entries().size() == 1);
}

TEST_CASE("reuse rule walks the threshold") {
    auto arch = small_arch();
    const auto& ham = catalog_get("HAMMING_7_4");
    const auto& ldpc = catalog_get("LDPC_12_6");
    const std::size_t K = 6;
    const auto sig_h = spectral_signature(ham.pcm(), K);
    const auto sig_l = spectral_signature(ldpc.pcm(), K);
    const double d = spectral_distance(sig_h, sig_l);
    REQUIRE(d > 0.0);

    int calls = 0;
    auto cb = [&](const ParityCheckMatrix&) {
        ++calls;
        return tagged_mask(arch, std::size_t(calls % 2));
    };

    SECTION("similarity above tau reuses the stored mask") {
        const double beta = -std::log(0.6) / d;  // kappa* lands near 0.6
        MaskLibrary lib(K, 0.5, beta, arch);
        auto first = lib.select_or_create(ham.pcm(), cb, "seed", "t0");
        REQUIRE(first.decision == SelectDecision::Created);
        REQUIRE(first.kappa_star == 0.0);
        REQUIRE(calls == 1);
        const auto stored = lib.entries()[0].mask;

        auto res = lib.select_or_create(ldpc.pcm(), cb, "query", "t1");
        REQUIRE(res.decision == SelectDecision::Reused);
        REQUIRE_THAT(res.kappa_star, Catch::Matchers::WithinAbs(0.6, 1e-12));
        REQUIRE(res.kappa_star >= lib.tau());
        REQUIRE(res.index.value() == 0);
        REQUIRE(res.mask.head_bits == stored.head_bits);
        REQUIRE(res.mask.ffn_bits == stored.ffn_bits);
        REQUIRE(calls == 1);  // reuse never derives
        REQUIRE(lib.entries().size() == 1);
        REQUIRE(decision_name(res.decision) == std::string("REUSED"));
    }

    SECTION("similarity below tau derives and appends") {
        const double beta = -std::log(0.4) / d;
        MaskLibrary lib(K, 0.5, beta, arch);
        lib.select_or_create(ham.pcm(), cb, "seed", "t0");
        auto res = lib.select_or_create(ldpc.pcm(), cb, "query", "t1");
        REQUIRE(res.decision == SelectDecision::Created);
        REQUIRE_THAT(res.kappa_star, Catch::Matchers::WithinAbs(0.4, 1e-12));
        REQUIRE(res.kappa_star < lib.tau());
        REQUIRE(res.index.value() == 1);
        REQUIRE(lib.entries().size() == 2);
        REQUIRE(calls == 2);
        REQUIRE(decision_name(res.decision) == std::string("CREATED"));

        // The appended entry answers an exact re-query.
        auto again = lib.select_or_create(ldpc.pcm(), cb, "query2", "t2");
        REQUIRE(again.decision == SelectDecision::Reused);
        REQUIRE(again.kappa_star == 1.0);
        REQUIRE(again.index.value() == 1);
        REQUIRE(calls == 2);
    }
}

TEST_CASE("exact threshold boundary reuses") {
    auto arch = small_arch();
    const auto& ham = catalog_get("HAMMING_7_4");
    const std::size_t K = 6;
    const double beta = 0.1;

    auto stored_sig = spectral_signature(ham.pcm(), K);
    stored_sig.values[0] += 2.0;  // exact L2 distance 2 from the live signature
    const double tau = std::exp(-beta * 2.0);

    MaskLibrary lib(K, tau, beta, arch);
    lib.append_entry({stored_sig, tagged_mask(arch, 1), "offset", "t0"});

    int calls = 0;
    auto res = lib.select_or_create(
        ham.pcm(),
        [&](const ParityCheckMatrix&) {
            ++calls;
            return StructuredMask::all_ones(arch);
        },
        "probe", "t1");
    REQUIRE(res.kappa_star == tau);  // same expression, same rounding
    REQUIRE(res.decision == SelectDecision::Reused);
    REQUIRE(calls == 0);
    REQUIRE(res.mask.head_bits == tagged_mask(arch, 1).head_bits);
}

TEST_CASE("failed derivation leaves the library untouched") {
    auto arch = small_arch();
    const auto& ham = catalog_get("HAMMING_7_4");
    const auto& ldpc = catalog_get("LDPC_12_6");
    MaskLibrary lib(6, 0.999999, 1e3, arch);  // huge beta: nothing ever reuses
    lib.select_or_create(
        ham.pcm(), [&](const ParityCheckMatrix&) { return tagged_mask(arch, 0); }, "seed", "t0");
    REQUIRE(lib.entries().size() == 1);

    auto boom = [](const ParityCheckMatrix&) -> StructuredMask {
        throw std::runtime_error("derivation failed");
    };
    REQUIRE_THROWS_AS(lib.select_or_create(ldpc.pcm(), boom, "bad", "t1"), std::runtime_error);
    REQUIRE(lib.entries().size() == 1);
    REQUIRE(lib.entries()[0].code_label == "seed");
}

TEST_CASE("library files round trip") {
    auto arch = small_arch();
    const auto& ham = catalog_get("HAMMING_7_4");
    const auto& ldpc = catalog_get("LDPC_12_6");
    MaskLibrary lib(6, 0.5, 50.0, arch);  // beta large enough that distinct codes create
    int calls = 0;
    auto cb = [&](const ParityCheckMatrix&) {
        ++calls;
        return tagged_mask(arch, std::size_t(calls % 2));
    };
    lib.select_or_create(ham.pcm(), cb, "HAMMING_7_4", "2026-01-01T00:00:00Z");
    lib.select_or_create(ldpc.pcm(), cb, "LDPC_12_6", "2026-01-02T00:00:00Z");
    REQUIRE(lib.entries().size() == 2);

    const std::string path = "/tmp/sap_test_library.json";
    save_library(lib, path);
    MaskLibrary back = load_library(path);

    REQUIRE(back.k() == lib.k());
    REQUIRE(back.tau() == lib.tau());
    REQUIRE(back.beta() == lib.beta());
    REQUIRE(back.arch().d_model == arch.d_model);
    REQUIRE(back.entries().size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        REQUIRE(back.entries()[i].code_label == lib.entries()[i].code_label);
        REQUIRE(back.entries()[i].created_at == lib.entries()[i].created_at);
        REQUIRE(back.entries()[i].signature.values == lib.entries()[i].signature.values);
        REQUIRE(back.entries()[i].mask.head_bits == lib.entries()[i].mask.head_bits);
        REQUIRE(back.entries()[i].mask.ffn_bits == lib.entries()[i].mask.ffn_bits);
    }

    // Retrieval replays identically on the loaded copy.
    const auto probe = spectral_signature(ldpc.pcm(), 6);
    auto h0 = lib.retrieve(probe);
    auto h1 = back.retrieve(probe);
    REQUIRE(h0.index == h1.index);
    REQUIRE(h0.distance == h1.distance);
    REQUIRE(h0.similarity == h1.similarity);
}

TEST_CASE("version gate names the supported format") {
    auto arch = small_arch();
    const auto& ham = catalog_get("HAMMING_7_4");
    MaskLibrary lib(6, 0.5, 0.1, arch);
    lib.select_or_create(
        ham.pcm(), [&](const ParityCheckMatrix&) { return StructuredMask::all_ones(arch); },
        "seed", "t0");
    const std::string path = "/tmp/sap_test_library_ver.json";
    save_library(lib, path);

    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    const auto pos = text.find("sap-library-v1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 14, "sap-library-v9");
    std::ofstream out(path, std::ios::trunc);
    out << text;
    out.close();

    try {
        load_library(path);
        FAIL("expected version rejection");
    } catch (const std::runtime_error& e) {
        REQUIRE(std::string(e.what()).find("sap-library-v1") != std::string::npos);
    }
}
