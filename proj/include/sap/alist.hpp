#pragma once

// MacKay alist reader/writer for sparse parity-check matrices.
//
// Layout, 1-indexed, zero-padded to the per-side maximum degree:
//   line 1: n m
//   line 2: max_col_degree max_row_degree
//   line 3: n column degrees
//   line 4: m row degrees
//   next n lines: for each column, the rows holding a 1, padded with 0s
//   next m lines: for each row, the columns holding a 1, padded with 0s
// Both neighbor sections are read and cross-checked; a mismatch means the
// file is internally inconsistent, not merely oddly formatted.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2.hpp"

namespace sap {

struct AlistParseError : std::runtime_error {
    AlistParseError(std::size_t line, const std::string& what)
        : std::runtime_error("alist parse error at line " + std::to_string(line) + ": " + what),
          line_number(line) {}
    std::size_t line_number;
};

namespace detail {

// Splits a line into base-10 integers; anything else is an error.
inline std::vector<long long> alist_line_ints(const std::string& line, std::size_t line_no) {
    std::vector<long long> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw AlistParseError(line_no, "expected integer, got '" + tok + "'");
        }
        if (used != tok.size())
            throw AlistParseError(line_no, "expected integer, got '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace detail

inline ParityCheckMatrix parse_alist(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() -> std::vector<long long> {
        while (std::getline(in, line)) {
            ++line_no;
            auto vals = detail::alist_line_ints(line, line_no);
            if (!vals.empty()) return vals;
        }
        throw AlistParseError(line_no + 1, "unexpected end of input");
    };

    auto header = next_line();
    if (header.size() != 2)
        throw AlistParseError(line_no, "header must be 'n m'");
    const long long n = header[0], m = header[1];
    if (n <= 0 || m <= 0)
        throw AlistParseError(line_no, "dimensions must be positive, got n=" +
                                           std::to_string(n) + " m=" + std::to_string(m));

    auto maxdeg = next_line();
    if (maxdeg.size() != 2)
        throw AlistParseError(line_no, "expected 'max_col_degree max_row_degree'");
    const long long max_col = maxdeg[0], max_row = maxdeg[1];
    if (max_col < 0 || max_col > m || max_row < 0 || max_row > n)
        throw AlistParseError(line_no, "maximum degrees out of range");

    auto read_degrees = [&](long long count, long long cap, const char* side) {
        auto vals = next_line();
        if (static_cast<long long>(vals.size()) != count)
            throw AlistParseError(line_no, std::string(side) + " degree list has " +
                                               std::to_string(vals.size()) + " entries, expected " +
                                               std::to_string(count));
        for (long long d : vals)
            if (d < 0 || d > cap)
                throw AlistParseError(line_no, std::string(side) + " degree " + std::to_string(d) +
                                                   " exceeds declared maximum " + std::to_string(cap));
        return vals;
    };
    const auto col_deg = read_degrees(n, max_col, "column");
    const auto row_deg = read_degrees(m, max_row, "row");

    // Degree sums must agree or the two neighbor sections cannot describe
    // one matrix.
    long long col_sum = 0, row_sum = 0;
    for (long long d : col_deg) col_sum += d;
    for (long long d : row_deg) row_sum += d;
    if (col_sum != row_sum)
        throw AlistParseError(line_no, "column degrees sum to " + std::to_string(col_sum) +
                                           " but row degrees sum to " + std::to_string(row_sum));

    BitMatrix bits{std::size_t(m), std::size_t(n)};

    // A neighbor line carries exactly max_deg entries: `deg` real indices
    // first, then zero padding. A zero in the leading section or a nonzero
    // in the padding is a format violation.
    auto read_neighbors = [&](long long idx, long long deg, long long max_deg, long long range,
                              const char* side, auto&& record) {
        auto vals = next_line();
        if (static_cast<long long>(vals.size()) != max_deg)
            throw AlistParseError(line_no, std::string(side) + " " + std::to_string(idx + 1) +
                                               " neighbor list has " + std::to_string(vals.size()) +
                                               " entries, expected " + std::to_string(max_deg));
        for (long long j = 0; j < max_deg; ++j) {
            const long long v = vals[std::size_t(j)];
            if (j < deg) {
                if (v == 0)
                    throw AlistParseError(line_no, std::string(side) + " " + std::to_string(idx + 1) +
                                                       ": padding zero inside the first " +
                                                       std::to_string(deg) + " entries");
                if (v < 1 || v > range)
                    throw AlistParseError(line_no, std::string(side) + " " + std::to_string(idx + 1) +
                                                       ": index " + std::to_string(v) +
                                                       " outside [1, " + std::to_string(range) + "]");
                record(std::size_t(v - 1));
            } else if (v != 0) {
                throw AlistParseError(line_no, std::string(side) + " " + std::to_string(idx + 1) +
                                                   ": expected zero padding, got " + std::to_string(v));
            }
        }
    };

    for (long long c = 0; c < n; ++c) {
        read_neighbors(c, col_deg[std::size_t(c)], max_col, m, "column", [&](std::size_t r) {
            if (bits.get(r, std::size_t(c)))
                throw AlistParseError(line_no, "column " + std::to_string(c + 1) +
                                                   ": duplicate row index " + std::to_string(r + 1));
            bits.set(r, std::size_t(c), true);
        });
    }

    BitMatrix by_rows{std::size_t(m), std::size_t(n)};
    for (long long r = 0; r < m; ++r) {
        read_neighbors(r, row_deg[std::size_t(r)], max_row, n, "row", [&](std::size_t c) {
            if (by_rows.get(std::size_t(r), c))
                throw AlistParseError(line_no, "row " + std::to_string(r + 1) +
                                                   ": duplicate column index " + std::to_string(c + 1));
            by_rows.set(std::size_t(r), c, true);
        });
    }

    if (!(bits == by_rows))
        throw AlistParseError(line_no, "column lists and row lists describe different matrices");

    // Trailing junk is rejected so truncated or concatenated files fail loudly.
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::alist_line_ints(line, line_no).empty())
            throw AlistParseError(line_no, "unexpected trailing content");
    }

    return ParityCheckMatrix(std::move(bits));
}

inline std::string write_alist(const ParityCheckMatrix& h) {
    const std::size_t m = h.check_count(), n = h.bit_count();
    std::vector<std::vector<std::size_t>> col_rows(n), row_cols(m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (h.get(r, c)) {
                col_rows[c].push_back(r + 1);
                row_cols[r].push_back(c + 1);
            }

    std::size_t max_col = 0, max_row = 0;
    for (const auto& v : col_rows) max_col = std::max(max_col, v.size());
    for (const auto& v : row_cols) max_row = std::max(max_row, v.size());

    std::ostringstream out;
    out << n << ' ' << m << '\n' << max_col << ' ' << max_row << '\n';
    auto emit_degrees = [&](const std::vector<std::vector<std::size_t>>& lists) {
        for (std::size_t i = 0; i < lists.size(); ++i)
            out << lists[i].size() << (i + 1 == lists.size() ? '\n' : ' ');
    };
    auto emit_neighbors = [&](const std::vector<std::vector<std::size_t>>& lists, std::size_t width) {
        for (const auto& v : lists) {
            for (std::size_t j = 0; j < width; ++j)
                out << (j < v.size() ? v[j] : 0) << (j + 1 == width ? '\n' : ' ');
        }
    };
    emit_degrees(col_rows);
    emit_degrees(row_cols);
    emit_neighbors(col_rows, max_col);
    emit_neighbors(row_cols, max_row);
    return out.str();
}

inline ParityCheckMatrix load_alist_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open alist file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_alist(ss.str());
}

inline void save_alist_file(const ParityCheckMatrix& h, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file for writing: " + path);
    f << write_alist(h);
    if (!f) throw std::runtime_error("failed writing alist file: " + path);
}

}  // namespace sap
