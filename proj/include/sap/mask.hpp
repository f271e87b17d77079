#pragma once

// Structured pruning masks over attention heads and FFN channels, their
// Jaccard overlap, and the FLOPs accounting that defines pruning budgets.
// Bit semantics: 1 = retained, 0 = pruned.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sap {

struct DecoderArchitecture {
    std::size_t layers = 0;
    std::size_t heads = 0;
    std::size_t d_model = 0;
    std::size_t d_ffn = 0;

    std::size_t head_dim() const { return d_model / heads; }

    void validate() const {
        if (layers < 1 || heads < 1 || d_model < 1 || d_ffn < 1)
            throw std::invalid_argument("DecoderArchitecture: all counts must be at least 1");
        if (d_model % heads != 0)
            throw std::invalid_argument("DecoderArchitecture: d_model " + std::to_string(d_model) +
                                        " not divisible by heads " + std::to_string(heads));
    }

    bool operator==(const DecoderArchitecture& o) const {
        return layers == o.layers && heads == o.heads && d_model == o.d_model && d_ffn == o.d_ffn;
    }
    bool operator!=(const DecoderArchitecture& o) const { return !(*this == o); }
};

struct StructuredMask {
    std::vector<std::vector<std::uint8_t>> head_bits;  // [layer][head]
    std::vector<std::vector<std::uint8_t>> ffn_bits;   // [layer][channel]

    static StructuredMask all_ones(const DecoderArchitecture& arch) {
        arch.validate();
        StructuredMask m;
        m.head_bits.assign(arch.layers, std::vector<std::uint8_t>(arch.heads, 1));
        m.ffn_bits.assign(arch.layers, std::vector<std::uint8_t>(arch.d_ffn, 1));
        return m;
    }

    bool matches(const DecoderArchitecture& arch) const {
        if (head_bits.size() != arch.layers || ffn_bits.size() != arch.layers) return false;
        for (const auto& v : head_bits)
            if (v.size() != arch.heads) return false;
        for (const auto& v : ffn_bits)
            if (v.size() != arch.d_ffn) return false;
        return true;
    }

    bool same_shape(const StructuredMask& o) const {
        if (head_bits.size() != o.head_bits.size() || ffn_bits.size() != o.ffn_bits.size())
            return false;
        for (std::size_t l = 0; l < head_bits.size(); ++l)
            if (head_bits[l].size() != o.head_bits[l].size()) return false;
        for (std::size_t l = 0; l < ffn_bits.size(); ++l)
            if (ffn_bits[l].size() != o.ffn_bits[l].size()) return false;
        return true;
    }

    void validate_bits() const {
        for (const auto& layer : {&head_bits, &ffn_bits})
            for (const auto& v : *layer)
                for (std::uint8_t b : v)
                    if (b > 1) throw std::invalid_argument("StructuredMask: bits must be 0 or 1");
    }

    std::size_t retained_heads() const {
        std::size_t c = 0;
        for (const auto& v : head_bits)
            for (std::uint8_t b : v) c += b;
        return c;
    }
    std::size_t retained_ffn() const {
        std::size_t c = 0;
        for (const auto& v : ffn_bits)
            for (std::uint8_t b : v) c += b;
        return c;
    }

    bool operator==(const StructuredMask& o) const {
        return head_bits == o.head_bits && ffn_bits == o.ffn_bits;
    }
    bool operator!=(const StructuredMask& o) const { return !(*this == o); }
};

namespace detail {
template <typename Op>
StructuredMask combine_masks(const StructuredMask& a, const StructuredMask& b, Op op) {
    if (!a.same_shape(b))
        throw std::invalid_argument("mask combine: shapes differ");
    StructuredMask out = a;
    for (std::size_t l = 0; l < a.head_bits.size(); ++l)
        for (std::size_t i = 0; i < a.head_bits[l].size(); ++i)
            out.head_bits[l][i] = std::uint8_t(op(a.head_bits[l][i], b.head_bits[l][i]));
    for (std::size_t l = 0; l < a.ffn_bits.size(); ++l)
        for (std::size_t i = 0; i < a.ffn_bits[l].size(); ++i)
            out.ffn_bits[l][i] = std::uint8_t(op(a.ffn_bits[l][i], b.ffn_bits[l][i]));
    return out;
}
}  // namespace detail

inline StructuredMask mask_union(const StructuredMask& a, const StructuredMask& b) {
    return detail::combine_masks(a, b, [](std::uint8_t x, std::uint8_t y) { return x | y; });
}
inline StructuredMask mask_intersection(const StructuredMask& a, const StructuredMask& b) {
    return detail::combine_masks(a, b, [](std::uint8_t x, std::uint8_t y) { return x & y; });
}

// Overlap of the retained-unit sets. Two masks that retain nothing agree
// perfectly, hence 1.0 for the empty/empty case.
inline double jaccard(const StructuredMask& a, const StructuredMask& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("jaccard: masks address different architectures");
    std::size_t inter = 0, uni = 0;
    auto tally = [&](const std::vector<std::vector<std::uint8_t>>& va,
                     const std::vector<std::vector<std::uint8_t>>& vb) {
        for (std::size_t l = 0; l < va.size(); ++l)
            for (std::size_t i = 0; i < va[l].size(); ++i) {
                inter += va[l][i] & vb[l][i];
                uni += va[l][i] | vb[l][i];
            }
    };
    tally(a.head_bits, b.head_bits);
    tally(a.ffn_bits, b.ffn_bits);
    if (uni == 0) return 1.0;
    return double(inter) / double(uni);
}

// FLOPs accounting: multiply-accumulates x2, matmul work only, decomposed
// additively per unit so pruning a unit removes exactly its contribution.
inline double per_head_flops(std::size_t d_model, std::size_t head_dim, std::size_t seq_len) {
    const double s = double(seq_len);
    return 2.0 * s * (3.0 * double(d_model) * double(head_dim) + double(head_dim) * double(d_model)) +
           2.0 * s * s * double(head_dim) * 2.0;
}

inline double per_ffn_channel_flops(std::size_t d_model, std::size_t seq_len) {
    return 2.0 * double(seq_len) * (double(d_model) + double(d_model));
}

inline double model_flops(const DecoderArchitecture& arch, std::size_t seq_len) {
    arch.validate();
    if (seq_len < 1) throw std::invalid_argument("model_flops: seq_len must be at least 1");
    const double head = per_head_flops(arch.d_model, arch.head_dim(), seq_len);
    const double chan = per_ffn_channel_flops(arch.d_model, seq_len);
    return double(arch.layers) * (double(arch.heads) * head + double(arch.d_ffn) * chan);
}

inline double masked_flops(const DecoderArchitecture& arch, const StructuredMask& mask,
                           std::size_t seq_len) {
    arch.validate();
    if (!mask.matches(arch))
        throw std::invalid_argument("masked_flops: mask does not match architecture");
    if (seq_len < 1) throw std::invalid_argument("masked_flops: seq_len must be at least 1");
    const double head = per_head_flops(arch.d_model, arch.head_dim(), seq_len);
    const double chan = per_ffn_channel_flops(arch.d_model, seq_len);
    double total = 0.0;
    for (std::size_t l = 0; l < arch.layers; ++l) {
        for (std::uint8_t b : mask.head_bits[l]) total += b ? head : 0.0;
        for (std::uint8_t b : mask.ffn_bits[l]) total += b ? chan : 0.0;
    }
    return total;
}

}  // namespace sap
