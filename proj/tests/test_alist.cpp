#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "sap/alist.hpp"
#include "sap/catalog.hpp"

using namespace sap;

namespace {

std::vector<long long> tokens_of(const std::string& text) {
    std::istringstream ss(text);
    std::vector<long long> out;
    long long v;
    while (ss >> v) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("hand written alist loads to the expected matrix") {
    // H = [[1,1,0],[0,1,1]]: three variables, two checks, four edges.
    const std::string doc =
        "3 2\n"
        "2 2\n"
        "1 2 1\n"
        "2 2\n"
        "1 0\n"
        "1 2\n"
        "2 0\n"
        "1 2\n"
        "2 3\n";
    ParityCheckMatrix h = parse_alist(doc);
    REQUIRE(h.check_count() == 2);
    REQUIRE(h.bit_count() == 3);
    REQUIRE(h.edge_count() == 4);
    REQUIRE(h.bits() == BitMatrix::from_rows({{1, 1, 0}, {0, 1, 1}}));
}

TEST_CASE("zero inside the leading neighbor entries is rejected") {
    const std::string doc =
        "3 2\n"
        "2 2\n"
        "1 2 1\n"
        "2 2\n"
        "0 0\n"  // column 1 declares degree 1 but leads with padding
        "1 2\n"
        "2 0\n"
        "1 2\n"
        "2 3\n";
    try {
        parse_alist(doc);
        FAIL("expected parse error");
    } catch (const AlistParseError& e) {
        REQUIRE(e.line_number == 5);
    }
}

TEST_CASE("malformed header names its line") {
    try {
        parse_alist("3\n");
        FAIL("expected parse error");
    } catch (const AlistParseError& e) {
        REQUIRE(e.line_number == 1);
    }
    REQUIRE_THROWS_AS(parse_alist("3 nope\n"), AlistParseError);
    REQUIRE_THROWS_AS(parse_alist("0 2\n"), AlistParseError);
}

TEST_CASE("row and column sections must describe the same matrix") {
    const std::string doc =
        "3 2\n"
        "2 2\n"
        "1 2 1\n"
        "2 2\n"
        "1 0\n"
        "1 2\n"
        "2 0\n"
        "1 3\n"  // row 1 claims columns 1,3 but the column lists said 1,2
        "2 3\n";
    REQUIRE_THROWS_AS(parse_alist(doc), AlistParseError);
}

TEST_CASE("degree sums must agree across sides") {
    const std::string doc =
        "3 2\n"
        "2 2\n"
        "1 2 1\n"
        "2 1\n";
    REQUIRE_THROWS_AS(parse_alist(doc), AlistParseError);
}

TEST_CASE("duplicate neighbor indices are rejected") {
    const std::string doc =
        "3 2\n"
        "2 2\n"
        "2 1 1\n"
        "2 2\n"
        "1 1\n"
        "1 0\n"
        "2 0\n"
        "1 2\n"
        "2 3\n";
    REQUIRE_THROWS_AS(parse_alist(doc), AlistParseError);
}

TEST_CASE("trailing garbage is rejected") {
    const std::string doc =
        "3 2\n"
        "2 2\n"
        "1 2 1\n"
        "2 2\n"
        "1 0\n"
        "1 2\n"
        "2 0\n"
        "1 2\n"
        "2 3\n"
        "7\n";
    REQUIRE_THROWS_AS(parse_alist(doc), AlistParseError);
}

TEST_CASE("write then load is identity modulo whitespace") {
    const LinearCode& code = catalog_get("HAMMING_7_4");
    const std::string doc = write_alist(code.pcm());
    ParityCheckMatrix back = parse_alist(doc);
    REQUIRE(back == code.pcm());
    REQUIRE(tokens_of(write_alist(back)) == tokens_of(doc));
}

TEST_CASE("round trip is lossless for every catalog code") {
    for (const auto& name : catalog_names()) {
        const LinearCode& code = catalog_get(name);
        REQUIRE(parse_alist(write_alist(code.pcm())) == code.pcm());
    }
}

TEST_CASE("file round trip") {
    const LinearCode& code = catalog_get("LDPC_12_6");
    const std::string path = "alist_roundtrip_tmp.alist";
    save_alist_file(code.pcm(), path);
    ParityCheckMatrix back = load_alist_file(path);
    REQUIRE(back == code.pcm());
    std::remove(path.c_str());
    REQUIRE_THROWS(load_alist_file("no_such_file.alist"));
}
