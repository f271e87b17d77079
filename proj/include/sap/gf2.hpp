#pragma once

// GF(2) matrices packed 64 columns per word, plus the row-reduction and
// systematic-form machinery needed to turn parity checks into encoders.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sap {

class BitMatrix {
public:
    BitMatrix() = default;

    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols),
          words_per_row_((cols + 63) / 64),
          bits_(rows * words_per_row_, 0) {}

    static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.begin()->size() : 0;
        BitMatrix m(r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c)
                throw std::invalid_argument("from_rows: ragged row lengths");
            std::size_t j = 0;
            for (int v : row) m.set(i, j++, v != 0);
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (word(r, c) >> (c & 63)) & 1;
    }

    void set(std::size_t r, std::size_t c, bool v) {
        std::uint64_t& w = word(r, c);
        const std::uint64_t m = std::uint64_t(1) << (c & 63);
        w = v ? (w | m) : (w & ~m);
    }

    // dst ^= src, the only row update RREF needs.
    void xor_row(std::size_t dst, std::size_t src) {
        std::uint64_t* d = row_ptr(dst);
        const std::uint64_t* s = row_ptr(src);
        for (std::size_t w = 0; w < words_per_row_; ++w) d[w] ^= s[w];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(row_ptr(a), row_ptr(a) + words_per_row_, row_ptr(b));
    }

    bool row_is_zero(std::size_t r) const {
        const std::uint64_t* p = row_ptr(r);
        for (std::size_t w = 0; w < words_per_row_; ++w)
            if (p[w]) return false;
        return true;
    }

    std::size_t count_ones() const {
        std::size_t n = 0;
        for (std::uint64_t w : bits_) n += std::size_t(__builtin_popcountll(w));
        return n;
    }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }
    bool operator!=(const BitMatrix& o) const { return !(*this == o); }

private:
    std::uint64_t* row_ptr(std::size_t r) { return bits_.data() + r * words_per_row_; }
    const std::uint64_t* row_ptr(std::size_t r) const { return bits_.data() + r * words_per_row_; }

    std::uint64_t& word(std::size_t r, std::size_t c) {
        check_index(r, c);
        return bits_[r * words_per_row_ + (c >> 6)];
    }
    const std::uint64_t& word(std::size_t r, std::size_t c) const {
        check_index(r, c);
        return bits_[r * words_per_row_ + (c >> 6)];
    }

    void check_index(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            throw std::out_of_range("BitMatrix index (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") outside " +
                                    std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    std::size_t rows_ = 0, cols_ = 0, words_per_row_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Parity-check matrix: rows are checks, columns are code bits. The shape
// constraints below keep every downstream formula (rate, token count,
// adjacency size) well defined.
class ParityCheckMatrix {
public:
    explicit ParityCheckMatrix(BitMatrix bits) : bits_(std::move(bits)) {
        if (bits_.rows() < 1)
            throw std::invalid_argument("parity-check matrix needs at least one row");
        if (bits_.cols() < 2)
            throw std::invalid_argument("parity-check matrix needs at least two columns");
        if (bits_.rows() >= bits_.cols())
            throw std::invalid_argument(
                "parity-check matrix must have fewer rows than columns (got " +
                std::to_string(bits_.rows()) + "x" + std::to_string(bits_.cols()) + ")");
    }

    static ParityCheckMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
        return ParityCheckMatrix(BitMatrix::from_rows(rows));
    }

    const BitMatrix& bits() const { return bits_; }
    BitMatrix& bits() { return bits_; }

    std::size_t check_count() const { return bits_.rows(); }   // m = n - k when full rank
    std::size_t bit_count() const { return bits_.cols(); }     // n
    std::size_t message_bits() const { return bits_.cols() - bits_.rows(); }  // k, assuming full rank

    bool get(std::size_t r, std::size_t c) const { return bits_.get(r, c); }

    std::size_t edge_count() const { return bits_.count_ones(); }

    bool operator==(const ParityCheckMatrix& o) const { return bits_ == o.bits_; }

private:
    BitMatrix bits_;
};

// In-place reduced row echelon form over GF(2). Pivot columns get a lone 1;
// rows that reduce to zero collect at the bottom. Returns the rank.
inline std::size_t rref_in_place(BitMatrix& m) {
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < m.rows() && !m.get(sel, col)) ++sel;
        if (sel == m.rows()) continue;
        m.swap_rows(pivot_row, sel);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != pivot_row && m.get(r, col)) m.xor_row(r, pivot_row);
        ++pivot_row;
    }
    return pivot_row;
}

inline BitMatrix rref(const BitMatrix& m) {
    BitMatrix out = m;
    rref_in_place(out);
    return out;
}

inline std::size_t gf2_rank(const BitMatrix& m) {
    BitMatrix tmp = m;
    return rref_in_place(tmp);
}

// Applies a column permutation: column j of the input lands at column
// perm[j] of the result. perm must be a bijection on [0, cols).
inline BitMatrix permute_columns(const BitMatrix& m, const std::vector<std::size_t>& perm) {
    if (perm.size() != m.cols())
        throw std::invalid_argument("permute_columns: permutation length " +
                                    std::to_string(perm.size()) + " does not match column count " +
                                    std::to_string(m.cols()));
    std::vector<bool> seen(m.cols(), false);
    for (std::size_t p : perm) {
        if (p >= m.cols() || seen[p])
            throw std::invalid_argument("permute_columns: not a bijection on columns");
        seen[p] = true;
    }
    BitMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.get(r, j)) out.set(r, perm[j], true);
    return out;
}

inline ParityCheckMatrix permute_columns(const ParityCheckMatrix& h,
                                         const std::vector<std::size_t>& perm) {
    return ParityCheckMatrix(permute_columns(h.bits(), perm));
}

struct RankDeficiencyError : std::runtime_error {
    RankDeficiencyError(std::size_t rank, std::size_t rows)
        : std::runtime_error("parity-check matrix is rank deficient: rank " +
                             std::to_string(rank) + " < " + std::to_string(rows) + " rows"),
          rank_achieved(rank), rows_expected(rows) {}
    std::size_t rank_achieved;
    std::size_t rows_expected;
};

// Systematic generator for a full-rank H. Row-reduces H, reads off the
// pivot columns, and builds G so that pivot positions carry parity and the
// remaining k positions carry the message verbatim. Every row of G
// satisfies H g^T = 0 by construction.
inline BitMatrix systematic_generator(const ParityCheckMatrix& h) {
    BitMatrix r = h.bits();
    const std::size_t rank = rref_in_place(r);
    if (rank < h.check_count()) throw RankDeficiencyError(rank, h.check_count());

    const std::size_t n = h.bit_count();
    const std::size_t m = h.check_count();
    const std::size_t k = n - m;

    // Pivot column of each reduced row = leftmost 1.
    std::vector<std::size_t> pivot(m);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t row = 0; row < m; ++row) {
        std::size_t col = 0;
        while (col < n && !r.get(row, col)) ++col;
        pivot[row] = col;
        is_pivot[col] = true;
    }
    std::vector<std::size_t> free_cols;
    free_cols.reserve(k);
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    // Codeword for message e_i: message bit at free column i, and at each
    // pivot column the reduced-row entry for that free column (GF(2)
    // back-substitution is a straight copy once H is in RREF).
    BitMatrix g(k, n);
    for (std::size_t i = 0; i < k; ++i) {
        g.set(i, free_cols[i], true);
        for (std::size_t row = 0; row < m; ++row)
            if (r.get(row, free_cols[i])) g.set(i, pivot[row], true);
    }
    return g;
}

inline std::vector<std::uint8_t> encode(const BitMatrix& generator,
                                        const std::vector<std::uint8_t>& message) {
    if (message.size() != generator.rows())
        throw std::invalid_argument("encode: message length " + std::to_string(message.size()) +
                                    " does not match generator rows " +
                                    std::to_string(generator.rows()));
    std::vector<std::uint8_t> cw(generator.cols(), 0);
    for (std::size_t i = 0; i < message.size(); ++i) {
        if (!(message[i] & 1) && message[i] != 0)
            throw std::invalid_argument("encode: message entries must be 0 or 1");
        if (message[i])
            for (std::size_t j = 0; j < generator.cols(); ++j)
                cw[j] ^= std::uint8_t(generator.get(i, j));
    }
    return cw;
}

inline std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& h,
                                          const std::vector<std::uint8_t>& word) {
    if (word.size() != h.bit_count())
        throw std::invalid_argument("syndrome: word length " + std::to_string(word.size()) +
                                    " does not match code length " +
                                    std::to_string(h.bit_count()));
    std::vector<std::uint8_t> s(h.check_count(), 0);
    for (std::size_t r = 0; r < h.check_count(); ++r) {
        std::uint8_t acc = 0;
        for (std::size_t c = 0; c < h.bit_count(); ++c)
            acc ^= std::uint8_t(h.get(r, c) & (word[c] & 1));
        s[r] = acc;
    }
    return s;
}

inline bool syndrome_is_zero(const ParityCheckMatrix& h, const std::vector<std::uint8_t>& word) {
    const auto s = syndrome(h, word);
    return std::all_of(s.begin(), s.end(), [](std::uint8_t b) { return b == 0; });
}

enum class CodeFamily { Hamming, Bch, Ldpc, Polar, Custom };

inline const char* family_name(CodeFamily f) {
    switch (f) {
        case CodeFamily::Hamming: return "hamming";
        case CodeFamily::Bch: return "bch";
        case CodeFamily::Ldpc: return "ldpc";
        case CodeFamily::Polar: return "polar";
        case CodeFamily::Custom: return "custom";
    }
    return "custom";
}

inline CodeFamily family_from_name(const std::string& s) {
    if (s == "hamming") return CodeFamily::Hamming;
    if (s == "bch") return CodeFamily::Bch;
    if (s == "ldpc") return CodeFamily::Ldpc;
    if (s == "polar") return CodeFamily::Polar;
    if (s == "custom") return CodeFamily::Custom;
    throw std::invalid_argument("unknown code family: " + s);
}

// A code the pipeline can train against: parity checks plus a matching
// systematic generator, built lazily since pure graph analyses never
// need to encode.
class LinearCode {
public:
    LinearCode(std::string name, CodeFamily family, ParityCheckMatrix h)
        : name_(std::move(name)), family_(family), h_(std::move(h)) {}

    const std::string& name() const { return name_; }
    CodeFamily family() const { return family_; }
    const ParityCheckMatrix& pcm() const { return h_; }

    std::size_t n() const { return h_.bit_count(); }
    std::size_t k() const { return h_.bit_count() - h_.check_count(); }
    double rate() const { return double(k()) / double(n()); }

    const BitMatrix& generator() const {
        if (gen_.rows() == 0) gen_ = systematic_generator(h_);
        return gen_;
    }

    std::vector<std::uint8_t> encode_message(const std::vector<std::uint8_t>& message) const {
        return encode(generator(), message);
    }

private:
    std::string name_;
    CodeFamily family_;
    ParityCheckMatrix h_;
    mutable BitMatrix gen_;
};

}  // namespace sap
