#pragma once

// JSON persistence for masks, importance scores, LoRA adapters, and the
// mask library. The library writer emits signature values as 17-significant
// -digit decimals (lossless for doubles); everything else goes through
// nlohmann's round-trip-exact number formatting.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "library.hpp"
#include "lora.hpp"
#include "mask.hpp"
#include "pruning.hpp"
#include "spectrum.hpp"

namespace sap {

using nlohmann::json;

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json arch_to_json(const DecoderArchitecture& a) {
    return json{{"L", a.layers}, {"h", a.heads}, {"d_model", a.d_model}, {"d_ffn", a.d_ffn}};
}

inline DecoderArchitecture arch_from_json(const json& j) {
    DecoderArchitecture a;
    a.layers = j.at("L").get<std::size_t>();
    a.heads = j.at("h").get<std::size_t>();
    a.d_model = j.at("d_model").get<std::size_t>();
    a.d_ffn = j.at("d_ffn").get<std::size_t>();
    a.validate();
    return a;
}

inline constexpr int kMaskFileVersion = 1;

inline json mask_to_json(const DecoderArchitecture& arch, const StructuredMask& mask) {
    if (!mask.matches(arch))
        throw std::invalid_argument("mask_to_json: mask does not match architecture");
    return json{{"version", kMaskFileVersion},
                {"arch", arch_to_json(arch)},
                {"head_bits", mask.head_bits},
                {"ffn_bits", mask.ffn_bits}};
}

inline std::pair<DecoderArchitecture, StructuredMask> mask_from_json(const json& j) {
    if (j.at("version").get<int>() != kMaskFileVersion)
        throw std::runtime_error("mask file version " + j.at("version").dump() + ", expected " +
                                 std::to_string(kMaskFileVersion));
    DecoderArchitecture arch = arch_from_json(j.at("arch"));
    StructuredMask mask;
    mask.head_bits = j.at("head_bits").get<std::vector<std::vector<std::uint8_t>>>();
    mask.ffn_bits = j.at("ffn_bits").get<std::vector<std::vector<std::uint8_t>>>();
    mask.validate_bits();
    if (!mask.matches(arch))
        throw std::runtime_error("mask file bits do not match its declared architecture");
    return {arch, mask};
}

inline json scores_to_json(const ImportanceScores& s) {
    return json{{"version", 1},
                {"head_scores", s.head_scores},
                {"ffn_scores", s.ffn_scores},
                {"calib_frames", s.calib_frames},
                {"calib_seed", s.calib_seed}};
}

inline ImportanceScores scores_from_json(const json& j) {
    ImportanceScores s;
    s.head_scores = j.at("head_scores").get<std::vector<Vector>>();
    s.ffn_scores = j.at("ffn_scores").get<std::vector<Vector>>();
    s.calib_frames = j.at("calib_frames").get<std::uint64_t>();
    s.calib_seed = j.at("calib_seed").get<std::uint64_t>();
    return s;
}

inline constexpr int kAdapterFileVersion = 1;

inline json adapters_to_json(const LoraAdapterSet& set) {
    json targets = json::array();
    for (const auto& ad : set.adapters) {
        targets.push_back(json{{"layer", ad.layer},
                               {"kind", lora_target_name(ad.kind)},
                               {"d_out", ad.b.rows},
                               {"d_in", ad.a.cols},
                               {"a", ad.a.data},
                               {"b", ad.b.data}});
    }
    return json{{"version", kAdapterFileVersion},
                {"rank", set.rank},
                {"alpha", set.alpha},
                {"scaling", "alpha_over_r"},
                {"merged", set.merged},
                {"targets", targets}};
}

inline LoraAdapterSet adapters_from_json(const json& j) {
    if (j.at("version").get<int>() != kAdapterFileVersion)
        throw std::runtime_error("adapter file version " + j.at("version").dump() + ", expected " +
                                 std::to_string(kAdapterFileVersion));
    if (j.at("scaling").get<std::string>() != "alpha_over_r")
        throw std::runtime_error("adapter file uses unknown scaling convention '" +
                                 j.at("scaling").get<std::string>() + "'");
    LoraAdapterSet set;
    set.rank = j.at("rank").get<std::size_t>();
    set.alpha = j.at("alpha").get<double>();
    set.merged = j.at("merged").get<bool>();
    for (const auto& t : j.at("targets")) {
        LoraAdapter ad;
        ad.layer = t.at("layer").get<std::size_t>();
        const std::string kind = t.at("kind").get<std::string>();
        if (kind == "q") ad.kind = LoraTarget::Q;
        else if (kind == "k") ad.kind = LoraTarget::K;
        else if (kind == "v") ad.kind = LoraTarget::V;
        else if (kind == "o") ad.kind = LoraTarget::O;
        else throw std::runtime_error("adapter file has unknown target kind '" + kind + "'");
        const std::size_t d_out = t.at("d_out").get<std::size_t>();
        const std::size_t d_in = t.at("d_in").get<std::size_t>();
        ad.a = Matrix(set.rank, d_in);
        ad.b = Matrix(d_out, set.rank);
        const auto av = t.at("a").get<std::vector<double>>();
        const auto bv = t.at("b").get<std::vector<double>>();
        if (av.size() != ad.a.data.size() || bv.size() != ad.b.data.size())
            throw std::runtime_error("adapter file tensor sizes do not match declared shapes");
        ad.a.data = av;
        ad.b.data = bv;
        set.adapters.push_back(std::move(ad));
    }
    return set;
}

inline constexpr const char* kLibraryFileVersion = "sap-library-v1";

// Hand-rolled writer: keeps signature entries at exactly 17 significant
// digits and the layout stable for diffing.
inline std::string library_to_json_text(const MaskLibrary& lib) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"version\": " << json(kLibraryFileVersion).dump() << ",\n";
    out << "  \"K\": " << lib.k() << ",\n";
    out << "  \"tau\": " << format_g17(lib.tau()) << ",\n";
    out << "  \"beta\": " << format_g17(lib.beta()) << ",\n";
    out << "  \"arch\": " << arch_to_json(lib.arch()).dump() << ",\n";
    out << "  \"entries\": [";
    const auto& entries = lib.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const LibraryEntry& e = entries[i];
        out << (i ? ",\n    {" : "\n    {");
        out << "\"label\": " << json(e.code_label).dump() << ", ";
        out << "\"created_at\": " << json(e.created_at).dump() << ", ";
        out << "\"source_dims\": [" << e.signature.source_n << ", " << e.signature.source_k
            << "], ";
        out << "\"signature\": [";
        for (std::size_t v = 0; v < e.signature.values.size(); ++v)
            out << (v ? ", " : "") << format_g17(e.signature.values[v]);
        out << "], ";
        out << "\"mask\": {\"head_bits\": " << json(e.mask.head_bits).dump()
            << ", \"ffn_bits\": " << json(e.mask.ffn_bits).dump() << "}";
        out << "}";
    }
    out << (entries.empty() ? "]\n" : "\n  ]\n");
    out << "}\n";
    return out.str();
}

inline MaskLibrary library_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("library file is not valid JSON: ") + e.what());
    }
    const std::string version = j.at("version").get<std::string>();
    if (version != kLibraryFileVersion)
        throw std::runtime_error("library file version '" + version + "', expected '" +
                                 kLibraryFileVersion + "'");
    MaskLibrary lib(j.at("K").get<std::size_t>(), j.at("tau").get<double>(),
                    j.at("beta").get<double>(), arch_from_json(j.at("arch")));
    for (const auto& ej : j.at("entries")) {
        LibraryEntry e;
        e.code_label = ej.at("label").get<std::string>();
        e.created_at = ej.at("created_at").get<std::string>();
        e.signature.values = ej.at("signature").get<std::vector<double>>();
        e.signature.k_used = lib.k();
        if (e.signature.values.size() != lib.k())
            throw std::runtime_error("library entry '" + e.code_label + "' has " +
                                     std::to_string(e.signature.values.size()) +
                                     " signature values, expected " + std::to_string(lib.k()));
        const auto dims = ej.at("source_dims").get<std::vector<std::size_t>>();
        if (dims.size() != 2) throw std::runtime_error("library entry has malformed source_dims");
        e.signature.source_n = dims[0];
        e.signature.source_k = dims[1];
        e.mask.head_bits =
            ej.at("mask").at("head_bits").get<std::vector<std::vector<std::uint8_t>>>();
        e.mask.ffn_bits =
            ej.at("mask").at("ffn_bits").get<std::vector<std::vector<std::uint8_t>>>();
        lib.append_entry(std::move(e));
    }
    return lib;
}

inline void save_library(const MaskLibrary& lib, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open library file for writing: " + path);
    f << library_to_json_text(lib);
    if (!f) throw std::runtime_error("failed writing library file: " + path);
}

inline MaskLibrary load_library(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open library file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return library_from_json_text(ss.str());
}

inline json load_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + " is not valid JSON: " + e.what());
    }
    return j;
}

inline void save_json_file(const json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file for writing: " + path);
    f << j.dump(2) << '\n';
    if (!f) throw std::runtime_error("failed writing file: " + path);
}

}  // namespace sap
