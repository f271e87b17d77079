#pragma once

// Model checkpoints: versioned binary container with an architecture
// header (including per-layer head/channel counts, which differ after
// compaction), the active mask, and all tensors as little-endian f64.
// Byte layout is explicit so files are identical across platforms.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "decoder.hpp"
#include "mask.hpp"

namespace sap {

struct CheckpointError : std::runtime_error {
    explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}
inline void put_f64(std::string& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

class ByteReader {
public:
    ByteReader(const std::string& buf) : buf_(buf) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::uint8_t(buf_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(buf_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::uint8_t byte() {
        need(1);
        return std::uint8_t(buf_[pos_++]);
    }
    bool exhausted() const { return pos_ == buf_.size(); }
    std::size_t offset() const { return pos_; }

private:
    void need(std::size_t k) const {
        if (pos_ + k > buf_.size())
            throw CheckpointError("checkpoint truncated at byte offset " + std::to_string(pos_));
    }
    const std::string& buf_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline constexpr char kCheckpointMagic[8] = {'S', 'A', 'P', 'C', 'K', 'P', 'T', '\x01'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline std::string serialize_checkpoint(const DecoderModel& model) {
    std::string out;
    out.append(kCheckpointMagic, sizeof(kCheckpointMagic));
    detail::put_u32(out, kCheckpointVersion);
    detail::put_u32(out, std::uint32_t(model.arch.layers));
    detail::put_u32(out, std::uint32_t(model.arch.heads));
    detail::put_u32(out, std::uint32_t(model.arch.d_model));
    detail::put_u32(out, std::uint32_t(model.arch.d_ffn));
    for (const auto& l : model.layers) {
        detail::put_u32(out, std::uint32_t(l.heads));
        detail::put_u32(out, std::uint32_t(l.d_ffn));
    }
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        for (std::uint8_t b : model.active_mask.head_bits[li]) out.push_back(char(b));
        for (std::uint8_t b : model.active_mask.ffn_bits[li]) out.push_back(char(b));
    }
    // const_cast is confined to enumeration; tensors are only read
    auto refs = tensor_refs(const_cast<DecoderModel&>(model));
    for (const auto& r : refs)
        for (std::size_t i = 0; i < r.size; ++i) detail::put_f64(out, r.data[i]);
    return out;
}

inline DecoderModel deserialize_checkpoint(const std::string& buf) {
    if (buf.size() < sizeof(kCheckpointMagic) ||
        std::memcmp(buf.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0)
        throw CheckpointError("not a model checkpoint (bad magic)");
    detail::ByteReader r(buf);
    for (std::size_t i = 0; i < sizeof(kCheckpointMagic); ++i) r.byte();

    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion)
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version) +
                              ", expected " + std::to_string(kCheckpointVersion));

    DecoderArchitecture arch;
    arch.layers = r.u32();
    arch.heads = r.u32();
    arch.d_model = r.u32();
    arch.d_ffn = r.u32();
    arch.validate();

    std::vector<std::pair<std::size_t, std::size_t>> layer_dims(arch.layers);
    for (auto& [heads, d_ffn] : layer_dims) {
        heads = r.u32();
        d_ffn = r.u32();
        if (heads > arch.heads || d_ffn > arch.d_ffn)
            throw CheckpointError("checkpoint layer dims exceed architecture");
    }

    DecoderModel m;
    m.arch = arch;
    const std::size_t d = arch.d_model;
    const std::size_t hd = arch.head_dim();
    m.emb_mag.assign(d, 0.0);
    m.emb_syn.assign(d, 0.0);
    m.layers.resize(arch.layers);
    for (std::size_t li = 0; li < arch.layers; ++li) {
        LayerWeights& l = m.layers[li];
        l.heads = layer_dims[li].first;
        l.d_ffn = layer_dims[li].second;
        const std::size_t width = l.heads * hd;
        l.w_q = Matrix(width, d);
        l.w_k = Matrix(width, d);
        l.w_v = Matrix(width, d);
        l.w_o = Matrix(d, width);
        l.ffn_in = Matrix(l.d_ffn, d);
        l.ffn_out = Matrix(d, l.d_ffn);
        l.ln1_scale.assign(d, 0.0);
        l.ln1_offset.assign(d, 0.0);
        l.ln2_scale.assign(d, 0.0);
        l.ln2_offset.assign(d, 0.0);
    }
    m.lnf_scale.assign(d, 0.0);
    m.lnf_offset.assign(d, 0.0);
    m.out_w.assign(d, 0.0);

    m.active_mask.head_bits.resize(arch.layers);
    m.active_mask.ffn_bits.resize(arch.layers);
    for (std::size_t li = 0; li < arch.layers; ++li) {
        m.active_mask.head_bits[li].resize(m.layers[li].heads);
        for (auto& b : m.active_mask.head_bits[li]) {
            b = r.byte();
            if (b > 1) throw CheckpointError("checkpoint mask byte out of range");
        }
        m.active_mask.ffn_bits[li].resize(m.layers[li].d_ffn);
        for (auto& b : m.active_mask.ffn_bits[li]) {
            b = r.byte();
            if (b > 1) throw CheckpointError("checkpoint mask byte out of range");
        }
    }

    for (auto& ref : tensor_refs(m))
        for (std::size_t i = 0; i < ref.size; ++i) ref.data[i] = r.f64();
    if (!r.exhausted())
        throw CheckpointError("checkpoint has " + std::to_string(buf.size() - r.offset()) +
                              " trailing bytes");
    return m;
}

inline void save_checkpoint(const DecoderModel& model, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CheckpointError("cannot open checkpoint for writing: " + path);
    const std::string buf = serialize_checkpoint(model);
    f.write(buf.data(), std::streamsize(buf.size()));
    if (!f) throw CheckpointError("failed writing checkpoint: " + path);
}

inline DecoderModel load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CheckpointError("cannot open checkpoint: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return deserialize_checkpoint(ss.str());
}

}  // namespace sap
