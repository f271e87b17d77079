#pragma once

// Run configuration, CSV emission, and the command bodies behind the CLI.
// Commands live here as plain functions returning result structs so tests
// can drive them without spawning a process; the CLI layer only parses
// argv and prints.

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bp.hpp"
#include "catalog.hpp"
#include "channel.hpp"
#include "checkpoint.hpp"
#include "json_io.hpp"
#include "library.hpp"
#include "lora.hpp"
#include "pruning.hpp"
#include "train.hpp"

namespace sap {

// Thrown for anything wrong with a config file or command arguments, so the
// CLI can map it to the validation exit code. Runtime failures (I/O,
// numerics) stay ordinary exceptions.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json* json_at_path(const json& root, const std::string& dotted) {
    const json* cur = &root;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &(*cur)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return cur;
}

}  // namespace detail

// Overwrites `out` when the dotted path is present; a present field of the
// wrong type is an error naming the path.
template <typename T>
void cfg_assign(const json& root, const std::string& dotted, T& out) {
    const json* node = detail::json_at_path(root, dotted);
    if (!node) return;
    try {
        out = node->get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config field '" + dotted + "': " + e.what());
    }
}

template <typename T>
T cfg_require(const json& root, const std::string& dotted) {
    const json* node = detail::json_at_path(root, dotted);
    if (!node) throw ConfigError("config field '" + dotted + "' is missing");
    try {
        return node->get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config field '" + dotted + "': " + e.what());
    }
}

struct CorrelatePair {
    std::string a;
    std::string b;  // code spec, or "@rref" / "@perm" derived from `a`
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::string out_dir;                 // empty -> $SAP_OUT_DIR -> "."
    std::vector<std::string> codes;      // catalog names or alist paths
    DecoderArchitecture arch{2, 4, 32, 64};
    TrainConfig train;
    CalibConfig calib;
    std::vector<double> prune_ratios{0.4};
    RecoveryConfig recover;
    std::vector<double> eval_snrs{0.0, 2.0, 4.0};
    EvalOptions eval_opts;
    std::size_t bp_iters = 50;
    std::size_t lib_k = 20;
    double lib_tau = 0.5;
    double lib_beta = 0.1;
    std::vector<CorrelatePair> pairs;
    std::vector<std::uint64_t> corr_seeds{1, 2, 3};
    double corr_ratio = 0.4;
    std::uint64_t corr_frames = 256;
    json raw;  // the parsed file, hashed into every output

    const std::string& primary_code() const {
        if (codes.empty()) throw ConfigError("config field 'codes' is missing or empty");
        return codes.front();
    }
};

inline RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    RunConfig c;
    c.raw = j;
    cfg_assign(j, "seed", c.seed);
    cfg_assign(j, "out_dir", c.out_dir);
    cfg_assign(j, "codes", c.codes);

    cfg_assign(j, "arch.L", c.arch.layers);
    cfg_assign(j, "arch.h", c.arch.heads);
    cfg_assign(j, "arch.d_model", c.arch.d_model);
    cfg_assign(j, "arch.d_ffn", c.arch.d_ffn);
    try {
        c.arch.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config field 'arch': ") + e.what());
    }

    c.train.seed = c.seed;
    cfg_assign(j, "train.epochs", c.train.epochs);
    cfg_assign(j, "train.steps_per_epoch", c.train.steps_per_epoch);
    cfg_assign(j, "train.batch_size", c.train.batch_size);
    cfg_assign(j, "train.lr_start", c.train.lr_start);
    cfg_assign(j, "train.lr_end", c.train.lr_end);
    cfg_assign(j, "train.snr_lo", c.train.snr_low_db);
    cfg_assign(j, "train.snr_hi", c.train.snr_high_db);
    cfg_assign(j, "train.seed", c.train.seed);
    try {
        c.train.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config field 'train': ") + e.what());
    }

    c.calib.seed = c.seed;
    cfg_assign(j, "calib.frames", c.calib.frames);
    cfg_assign(j, "calib.snr_lo", c.calib.snr_low_db);
    cfg_assign(j, "calib.snr_hi", c.calib.snr_high_db);
    cfg_assign(j, "calib.seed", c.calib.seed);
    if (c.calib.frames < 1) throw ConfigError("config field 'calib.frames': must be at least 1");

    if (detail::json_at_path(j, "prune.ratio") != nullptr)
        c.prune_ratios = {cfg_require<double>(j, "prune.ratio")};
    cfg_assign(j, "prune.ratios", c.prune_ratios);
    for (double r : c.prune_ratios)
        if (!(r >= 0.0 && r < 1.0))
            throw ConfigError("config field 'prune.ratios': each ratio must lie in [0,1)");

    c.recover.seed = c.seed;
    cfg_assign(j, "recover.gamma", c.recover.gamma);
    cfg_assign(j, "recover.epochs", c.recover.epochs);
    cfg_assign(j, "recover.steps_per_epoch", c.recover.steps_per_epoch);
    cfg_assign(j, "recover.batch_size", c.recover.batch_size);
    cfg_assign(j, "recover.rank", c.recover.rank);
    cfg_assign(j, "recover.alpha", c.recover.alpha);
    cfg_assign(j, "recover.lr_start", c.recover.lr_start);
    cfg_assign(j, "recover.lr_end", c.recover.lr_end);
    cfg_assign(j, "recover.snr_lo", c.recover.snr_low_db);
    cfg_assign(j, "recover.snr_hi", c.recover.snr_high_db);
    cfg_assign(j, "recover.seed", c.recover.seed);
    try {
        c.recover.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config field 'recover': ") + e.what());
    }

    cfg_assign(j, "eval.snrs", c.eval_snrs);
    cfg_assign(j, "eval.min_frames", c.eval_opts.min_frames);
    cfg_assign(j, "eval.min_errors", c.eval_opts.min_errors);
    cfg_assign(j, "eval.max_frames", c.eval_opts.max_frames);
    cfg_assign(j, "eval.random_codewords", c.eval_opts.random_codewords);
    cfg_assign(j, "eval.bp_iters", c.bp_iters);
    if (c.eval_snrs.empty()) throw ConfigError("config field 'eval.snrs': must be non-empty");
    if (c.eval_opts.min_frames < 1)
        throw ConfigError("config field 'eval.min_frames': must be at least 1");
    if (c.bp_iters < 1) throw ConfigError("config field 'eval.bp_iters': must be at least 1");

    cfg_assign(j, "library.K", c.lib_k);
    cfg_assign(j, "library.tau", c.lib_tau);
    cfg_assign(j, "library.beta", c.lib_beta);
    if (c.lib_k < 1) throw ConfigError("config field 'library.K': must be at least 1");
    if (!(c.lib_tau > 0.0 && c.lib_tau <= 1.0))
        throw ConfigError("config field 'library.tau': must lie in (0,1]");
    if (!(c.lib_beta > 0.0)) throw ConfigError("config field 'library.beta': must be positive");

    if (const json* node = detail::json_at_path(j, "correlate.pairs")) {
        if (!node->is_array())
            throw ConfigError("config field 'correlate.pairs': must be an array of [a,b] pairs");
        for (std::size_t i = 0; i < node->size(); ++i) {
            const json& p = (*node)[i];
            if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
                throw ConfigError("config field 'correlate.pairs[" + std::to_string(i) +
                                  "]': must be a [string, string] pair");
            c.pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
        }
    }
    cfg_assign(j, "correlate.seeds", c.corr_seeds);
    cfg_assign(j, "correlate.ratio", c.corr_ratio);
    cfg_assign(j, "correlate.frames", c.corr_frames);
    if (!(c.corr_ratio >= 0.0 && c.corr_ratio < 1.0))
        throw ConfigError("config field 'correlate.ratio': must lie in [0,1)");
    if (c.corr_seeds.empty())
        throw ConfigError("config field 'correlate.seeds': must be non-empty");
    if (c.corr_frames < 1)
        throw ConfigError("config field 'correlate.frames': must be at least 1");

    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    json j;
    try {
        j = load_json_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_run_config(j);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

// Hash of the parsed config (nlohmann orders object keys, so formatting of
// the source file does not matter).
inline std::string config_hash_hex(const json& j) {
    const std::uint64_t h = fnv1a64(j.dump());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string resolve_out_dir(const RunConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("SAP_OUT_DIR"); env && *env) return env;
    return ".";
}

inline std::string out_path(const RunConfig& cfg, const std::string& file) {
    const std::filesystem::path dir = resolve_out_dir(cfg);
    std::filesystem::create_directories(dir);
    return (dir / file).string();
}

inline std::string created_at_timestamp() {
    if (const char* env = std::getenv("SAP_CREATED_AT"); env && *env) return env;
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Every CSV starts with a comment line carrying the config hash and master
// seed, then a column header. Floats are written with format_g17 so equal
// runs produce byte-identical files.
class CsvFile {
public:
    CsvFile(const std::string& path, const std::string& hash, std::uint64_t seed,
            const std::string& columns)
        : path_(path), f_(path, std::ios::binary) {
        if (!f_) throw std::runtime_error("cannot open CSV for writing: " + path);
        f_ << "# config_hash=" << hash << " seed=" << seed << "\n";
        f_ << columns << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) f_ << (i ? "," : "") << cells[i];
        f_ << "\n";
    }

    void close() {
        f_.close();
        if (f_.fail()) throw std::runtime_error("failed writing CSV: " + path_);
    }

private:
    std::string path_;
    std::ofstream f_;
};

inline std::string csv_num(double v) { return format_g17(v); }
inline std::string csv_int(std::uint64_t v) { return std::to_string(v); }

// Catalog name, or a path to an alist file (anything with a slash or an
// .alist suffix counts as a path).
inline LinearCode resolve_code(const std::string& spec) {
    const bool is_path = spec.find('/') != std::string::npos ||
                         (spec.size() > 6 && spec.compare(spec.size() - 6, 6, ".alist") == 0);
    if (is_path) {
        ParityCheckMatrix pcm = load_alist_file(spec);
        std::string name = std::filesystem::path(spec).stem().string();
        return LinearCode(std::move(name), CodeFamily::Custom, std::move(pcm));
    }
    try {
        return catalog_get(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

// ---------------------------------------------------------------------------
// train

struct TrainOutcome {
    std::string checkpoint_path;
    std::string trace_path;
    std::vector<double> epoch_loss;
};

inline TrainOutcome cmd_train(const RunConfig& cfg) {
    std::vector<LinearCode> codes;
    for (const auto& spec : cfg.codes) codes.push_back(resolve_code(spec));
    if (codes.empty()) throw ConfigError("config field 'codes' is missing or empty");
    std::vector<const LinearCode*> ptrs;
    for (const auto& c : codes) ptrs.push_back(&c);

    DecoderModel model = make_decoder(cfg.arch, cfg.seed);
    TrainResult result = train(model, ptrs, cfg.train);

    TrainOutcome out;
    out.epoch_loss = result.epoch_loss;
    out.checkpoint_path = out_path(cfg, "checkpoint.bin");
    save_checkpoint(model, out.checkpoint_path);

    out.trace_path = out_path(cfg, "train_loss.csv");
    CsvFile csv(out.trace_path, config_hash_hex(cfg.raw), cfg.seed, "epoch,mean_loss");
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
        csv.row({csv_int(e), csv_num(result.epoch_loss[e])});
    csv.close();
    return out;
}

// ---------------------------------------------------------------------------
// prune

struct PruneReport {
    double target_ratio = 0.0;
    double achieved_ratio = 0.0;
    double full_flops = 0.0;
    double pruned_flops = 0.0;
    std::size_t full_params = 0;
    std::size_t pruned_params = 0;
    std::size_t retained_heads = 0;
    std::size_t retained_ffn = 0;
    std::string mask_path;
    std::string checkpoint_path;
    std::string report_path;
};

namespace detail {

inline std::string percent_tag(double ratio) {
    return std::to_string(static_cast<int>(std::llround(ratio * 100.0)));
}

inline PruneReport prune_with_mask(const RunConfig& cfg, const DecoderModel& model,
                                   const StructuredMask& mask, std::size_t seq_len,
                                   double target_ratio, const std::string& tag) {
    const DecoderModel masked = apply_mask(model, mask);
    const DecoderModel compacted = compact(masked, mask);

    PruneReport rep;
    rep.target_ratio = target_ratio;
    rep.full_flops = model_flops(model.arch, seq_len);
    rep.pruned_flops = masked_flops(model.arch, mask, seq_len);
    rep.achieved_ratio = 1.0 - rep.pruned_flops / rep.full_flops;
    rep.full_params = model.param_count();
    rep.pruned_params = compacted.param_count();
    rep.retained_heads = mask.retained_heads();
    rep.retained_ffn = mask.retained_ffn();

    rep.mask_path = out_path(cfg, "mask" + tag + ".json");
    save_json_file(mask_to_json(model.arch, mask), rep.mask_path);
    rep.checkpoint_path = out_path(cfg, "pruned" + tag + ".bin");
    save_checkpoint(compacted, rep.checkpoint_path);

    rep.report_path = out_path(cfg, "prune_report" + tag + ".json");
    save_json_file(json{{"target_ratio", rep.target_ratio},
                        {"achieved_ratio", rep.achieved_ratio},
                        {"full_flops", rep.full_flops},
                        {"pruned_flops", rep.pruned_flops},
                        {"full_params", rep.full_params},
                        {"pruned_params", rep.pruned_params},
                        {"retained_heads", rep.retained_heads},
                        {"retained_ffn", rep.retained_ffn},
                        {"seq_len", seq_len}},
                   rep.report_path);
    return rep;
}

}  // namespace detail

// One report per configured ratio; with `use_mask_path` set the mask is
// taken from that file instead of being derived (single report, tag "").
inline std::vector<PruneReport> cmd_prune(const RunConfig& cfg, const std::string& checkpoint_path,
                                          const std::string& use_mask_path = {}) {
    const DecoderModel model = load_checkpoint(checkpoint_path);
    const LinearCode code = resolve_code(cfg.primary_code());
    const std::size_t seq_len = code.n() + code.pcm().check_count();

    std::vector<PruneReport> reports;
    if (!use_mask_path.empty()) {
        auto [arch, mask] = mask_from_json(load_json_file(use_mask_path));
        if (!(arch == model.arch))
            throw std::runtime_error("mask file architecture does not match checkpoint");
        const double flops_ratio = 1.0 - masked_flops(model.arch, mask, seq_len) /
                                             model_flops(model.arch, seq_len);
        reports.push_back(detail::prune_with_mask(cfg, model, mask, seq_len, flops_ratio, ""));
        return reports;
    }

    const ImportanceScores scores = fisher_importance(model, code, cfg.calib);
    save_json_file(scores_to_json(scores), out_path(cfg, "importance.json"));
    const bool sweep = cfg.prune_ratios.size() > 1;
    for (double ratio : cfg.prune_ratios) {
        const StructuredMask mask = select_mask(scores, model.arch, seq_len, ratio);
        const std::string tag = sweep ? "_r" + detail::percent_tag(ratio) : "";
        reports.push_back(detail::prune_with_mask(cfg, model, mask, seq_len, ratio, tag));
    }
    return reports;
}

// ---------------------------------------------------------------------------
// sap (library selection)

struct SapOutcome {
    SelectDecision decision = SelectDecision::Created;
    double kappa_star = 0.0;
    std::optional<std::size_t> index;
    std::string label;
    std::size_t library_entries = 0;
    std::string mask_path;
    std::string record_path;
    std::string library_path;
};

inline SapOutcome cmd_sap(const RunConfig& cfg, const std::string& library_path,
                          const std::string& target_spec, const std::string& checkpoint_path,
                          bool create_new) {
    const DecoderModel model = load_checkpoint(checkpoint_path);
    const LinearCode target = resolve_code(target_spec);

    const bool existed = std::filesystem::exists(library_path);
    MaskLibrary lib = existed ? load_library(library_path)
                              : (create_new ? MaskLibrary(cfg.lib_k, cfg.lib_tau, cfg.lib_beta,
                                                          model.arch)
                                            : throw ConfigError("library file '" + library_path +
                                                                "' does not exist (pass --new to "
                                                                "start one)"));
    if (!(lib.arch() == model.arch))
        throw std::runtime_error("library architecture does not match checkpoint");

    const std::size_t seq_len = target.n() + target.pcm().check_count();
    const double ratio = cfg.prune_ratios.front();
    auto derive = [&](const ParityCheckMatrix& pcm) {
        LinearCode probe(target.name(), target.family(), pcm);
        const ImportanceScores scores = fisher_importance(model, probe, cfg.calib);
        return select_mask(scores, model.arch, seq_len, ratio);
    };

    const SelectResult res =
        lib.select_or_create(target.pcm(), derive, target.name(), created_at_timestamp());

    SapOutcome out;
    out.decision = res.decision;
    out.kappa_star = res.kappa_star;
    out.index = res.index;
    out.label = target.name();
    out.library_entries = lib.entries().size();
    out.library_path = library_path;

    out.mask_path = out_path(cfg, "selected_mask.json");
    save_json_file(mask_to_json(model.arch, res.mask), out.mask_path);

    if (res.decision == SelectDecision::Created || !existed) save_library(lib, library_path);

    out.record_path = out_path(cfg, "sap_decision.json");
    json rec{{"decision", decision_name(res.decision)},
             {"kappa_star", res.kappa_star},
             {"label", out.label},
             {"library", library_path},
             {"entries", out.library_entries}};
    rec["index"] = res.index ? json(*res.index) : json(nullptr);
    save_json_file(rec, out.record_path);
    return out;
}

// ---------------------------------------------------------------------------
// recover

struct RecoverOutcome {
    std::string adapters_path;
    std::string trace_path;
    std::string merged_path;  // empty unless merge requested
    std::vector<double> epoch_loss;
    double adapter_params = 0.0;
    double backbone_params = 0.0;
};

// `tag` distinguishes output files across sweep invocations (e.g. "_r4").
inline RecoverOutcome cmd_recover(const RunConfig& cfg, const std::string& pruned_path,
                                  const std::string& teacher_path, bool merge_out,
                                  const std::string& tag = {}) {
    const DecoderModel student = load_checkpoint(pruned_path);
    const DecoderModel teacher = load_checkpoint(teacher_path);
    const LinearCode code = resolve_code(cfg.primary_code());

    RecoveryResult result = recover(student, teacher, code, cfg.recover);

    RecoverOutcome out;
    out.epoch_loss = result.epoch_loss;
    out.adapter_params = double(result.adapters.param_count());
    out.backbone_params = double(student.param_count());

    out.adapters_path = out_path(cfg, "adapters" + tag + ".json");
    save_json_file(adapters_to_json(result.adapters), out.adapters_path);

    out.trace_path = out_path(cfg, "recover_loss" + tag + ".csv");
    CsvFile csv(out.trace_path, config_hash_hex(cfg.raw), cfg.seed, "epoch,mean_loss");
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
        csv.row({csv_int(e), csv_num(result.epoch_loss[e])});
    csv.close();

    if (merge_out) {
        DecoderModel merged = merge(student, result.adapters);
        out.merged_path = out_path(cfg, "merged" + tag + ".bin");
        save_checkpoint(merged, out.merged_path);
    }
    return out;
}

// ---------------------------------------------------------------------------
// eval

struct EvalModelSpec {
    enum class Kind { Hard, Bp, Checkpoint } kind = Kind::Hard;
    std::string checkpoint_path;
    std::string adapters_path;  // optional, rides on a checkpoint
};

struct EvalOutcome {
    std::string csv_path;
    std::vector<EvalPoint> points;
};

inline EvalOutcome cmd_eval(const RunConfig& cfg, const EvalModelSpec& spec,
                            const std::string& csv_name = "eval.csv") {
    const LinearCode code = resolve_code(cfg.primary_code());

    // Owners for whatever the decoder closure references.
    std::optional<DecoderModel> model;
    DecoderFn decoder;
    switch (spec.kind) {
        case EvalModelSpec::Kind::Hard:
            decoder = [](const std::vector<double>& y, double) { return hard_decision(y); };
            break;
        case EvalModelSpec::Kind::Bp: {
            const ParityCheckMatrix* pcm = &code.pcm();
            BpConfig bc;
            bc.max_iters = cfg.bp_iters;
            decoder = [pcm, bc](const std::vector<double>& y, double sigma) {
                return bp_decode(*pcm, channel_llr(y, sigma), bc).xhat;
            };
            break;
        }
        case EvalModelSpec::Kind::Checkpoint: {
            model = load_checkpoint(spec.checkpoint_path);
            if (!spec.adapters_path.empty()) {
                const LoraAdapterSet set = adapters_from_json(load_json_file(spec.adapters_path));
                if (set.merged)
                    throw std::runtime_error(
                        "adapter file is marked merged; evaluate the merged checkpoint instead");
                model = effective_model(*model, set);
            }
            decoder = neural_decoder(*model, code);
            break;
        }
    }

    std::vector<ChannelConfig> points;
    for (double snr : cfg.eval_snrs) points.push_back({snr, code.rate(), cfg.seed});

    EvalOutcome out;
    out.points = evaluate(points, code, decoder, cfg.eval_opts);

    out.csv_path = out_path(cfg, csv_name);
    CsvFile csv(out.csv_path, config_hash_hex(cfg.raw), cfg.seed,
                "ebn0_db,ber,fer,minus_ln_ber,frames,bit_errors,seed");
    for (const EvalPoint& p : out.points) {
        const std::string mlb = p.ber > 0.0 ? csv_num(-std::log(p.ber)) : "inf";
        csv.row({csv_num(p.ebn0_db), csv_num(p.ber), csv_num(p.fer), mlb, csv_int(p.frames),
                 csv_int(p.bit_errors), csv_int(p.seed)});
    }
    csv.close();
    return out;
}

// ---------------------------------------------------------------------------
// correlate

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    const std::size_t n = xs.size();
    if (n < 3) throw std::runtime_error("Pearson correlation undefined for fewer than 3 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::runtime_error("Pearson correlation undefined for a constant series");
    return sxy / std::sqrt(sxx * syy);
}

struct CorrelateRow {
    std::string label;
    std::uint64_t seed = 0;
    double kappa_adjacency = 0.0;
    double kappa_laplacian = 0.0;
    double kappa_wd = 0.0;
    double jaccard = 0.0;
};

struct CorrelateOutcome {
    std::vector<CorrelateRow> rows;
    double rho_adjacency = 0.0;
    double rho_laplacian = 0.0;
    double rho_wd = 0.0;
    std::string scatter_path;
    std::string summary_path;
};

namespace detail {

inline LinearCode derived_pair_code(const LinearCode& base, const std::string& spec,
                                    std::uint64_t seed, std::size_t pair_index) {
    if (spec == "@rref") {
        BitMatrix r = rref(base.pcm().bits());
        return LinearCode(base.name() + "@rref", base.family(), ParityCheckMatrix(std::move(r)));
    }
    if (spec == "@perm") {
        Rng rng = derive_rng(seed, "corr-perm", {pair_index});
        std::vector<std::size_t> perm(base.n());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.next_index(i)]);
        return LinearCode(base.name() + "@perm", base.family(),
                          permute_columns(base.pcm(), perm));
    }
    return resolve_code(spec);
}

}  // namespace detail

// For every (pair, seed): spectral similarity under three metrics, plus the
// Jaccard overlap of the two codes' dedicated masks derived from a backbone
// trained with that seed. Pearson rho per metric is computed over the pooled
// scatter.
inline CorrelateOutcome cmd_correlate(const RunConfig& cfg) {
    if (cfg.pairs.size() < 3)
        throw ConfigError("correlate: Pearson correlation undefined for fewer than 3 pairs");

    std::vector<LinearCode> mixture;
    for (const auto& spec : cfg.codes) mixture.push_back(resolve_code(spec));
    if (mixture.empty()) throw ConfigError("config field 'codes' is missing or empty");
    std::vector<const LinearCode*> ptrs;
    for (const auto& c : mixture) ptrs.push_back(&c);

    const SimilarityParams sim{cfg.lib_beta, SpectralMetric::Adjacency};
    CorrelateOutcome out;

    for (std::uint64_t seed : cfg.corr_seeds) {
        DecoderModel backbone = make_decoder(cfg.arch, seed);
        TrainConfig tc = cfg.train;
        tc.seed = seed;
        train(backbone, ptrs, tc);

        CalibConfig calib = cfg.calib;
        calib.frames = cfg.corr_frames;
        calib.seed = seed;

        auto dedicated_mask = [&](const LinearCode& code) {
            const ImportanceScores scores = fisher_importance(backbone, code, calib);
            const std::size_t seq_len = code.n() + code.pcm().check_count();
            return select_mask(scores, backbone.arch, seq_len, cfg.corr_ratio);
        };

        for (std::size_t pi = 0; pi < cfg.pairs.size(); ++pi) {
            const LinearCode a = resolve_code(cfg.pairs[pi].a);
            const LinearCode b = detail::derived_pair_code(a, cfg.pairs[pi].b, seed, pi);

            CorrelateRow row;
            row.label = a.name() + "|" + b.name();
            row.seed = seed;

            const SpectralSignature sa = spectral_signature(a.pcm(), cfg.lib_k);
            const SpectralSignature sb = spectral_signature(b.pcm(), cfg.lib_k);
            row.kappa_adjacency = spectral_similarity(spectral_distance(sa, sb), sim);

            const SpectralSignature la = laplacian_signature(a.pcm(), cfg.lib_k);
            const SpectralSignature lb = laplacian_signature(b.pcm(), cfg.lib_k);
            row.kappa_laplacian = spectral_similarity(spectral_distance(la, lb), sim);

            row.kappa_wd = spectral_similarity(degree_wd_distance(a.pcm(), b.pcm()), sim);
            row.jaccard = jaccard(dedicated_mask(a), dedicated_mask(b));
            out.rows.push_back(std::move(row));
        }
    }

    std::vector<double> adj, lap, wd, jac;
    for (const auto& r : out.rows) {
        adj.push_back(r.kappa_adjacency);
        lap.push_back(r.kappa_laplacian);
        wd.push_back(r.kappa_wd);
        jac.push_back(r.jaccard);
    }
    out.rho_adjacency = pearson(adj, jac);
    out.rho_laplacian = pearson(lap, jac);
    out.rho_wd = pearson(wd, jac);

    const std::string hash = config_hash_hex(cfg.raw);
    out.scatter_path = out_path(cfg, "correlate_scatter.csv");
    CsvFile scatter(out.scatter_path, hash, cfg.seed,
                    "pair,seed,kappa_adjacency,kappa_laplacian,kappa_wd,jaccard");
    for (const auto& r : out.rows)
        scatter.row({r.label, csv_int(r.seed), csv_num(r.kappa_adjacency),
                     csv_num(r.kappa_laplacian), csv_num(r.kappa_wd), csv_num(r.jaccard)});
    scatter.close();

    out.summary_path = out_path(cfg, "correlate_summary.csv");
    CsvFile summary(out.summary_path, hash, cfg.seed, "metric,rho,points");
    summary.row({"adjacency", csv_num(out.rho_adjacency), csv_int(out.rows.size())});
    summary.row({"laplacian", csv_num(out.rho_laplacian), csv_int(out.rows.size())});
    summary.row({"wd", csv_num(out.rho_wd), csv_int(out.rows.size())});
    summary.close();
    return out;
}

// ---------------------------------------------------------------------------
// library subcommands

inline std::string cmd_library_show(const std::string& library_path) {
    const MaskLibrary lib = load_library(library_path);
    std::ostringstream os;
    const auto& a = lib.arch();
    os << "library " << library_path << "\n";
    os << "  K=" << lib.k() << " tau=" << format_g17(lib.tau()) << " beta="
       << format_g17(lib.beta()) << " arch L=" << a.layers << " h=" << a.heads
       << " d_model=" << a.d_model << " d_ffn=" << a.d_ffn << "\n";
    os << "  entries: " << lib.entries().size() << "\n";
    for (std::size_t i = 0; i < lib.entries().size(); ++i) {
        const LibraryEntry& e = lib.entries()[i];
        os << "  [" << i << "] " << e.code_label << " created_at=" << e.created_at << " (n="
           << e.signature.source_n << ", k=" << e.signature.source_k
           << ") retained heads=" << e.mask.retained_heads() << " ffn=" << e.mask.retained_ffn()
           << "\n";
    }
    return os.str();
}

inline std::size_t cmd_library_add(const RunConfig& cfg, const std::string& library_path,
                                   const std::string& code_spec, const std::string& mask_path,
                                   bool create_new) {
    auto [mask_arch, mask] = mask_from_json(load_json_file(mask_path));
    const bool existed = std::filesystem::exists(library_path);
    MaskLibrary lib = existed
                          ? load_library(library_path)
                          : (create_new
                                 ? MaskLibrary(cfg.lib_k, cfg.lib_tau, cfg.lib_beta, mask_arch)
                                 : throw ConfigError("library file '" + library_path +
                                                     "' does not exist (pass --new to start one)"));
    const LinearCode code = resolve_code(code_spec);
    LibraryEntry entry;
    entry.signature = spectral_signature(code.pcm(), lib.k());
    entry.mask = std::move(mask);
    entry.code_label = code.name();
    entry.created_at = created_at_timestamp();
    lib.append_entry(std::move(entry));
    save_library(lib, library_path);
    return lib.entries().size();
}

}  // namespace sap
