// Command-line front end. All real work lives in sap/harness.hpp; this file
// parses argv, prints outcomes, and maps errors to exit codes:
//   0 success, 2 config/usage error, 3 runtime error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sap/sap.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"spectral-aligned pruning pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string checkpoint_path;
    std::string library_path;
    std::string mask_path;
    std::string adapters_path;
    std::string pruned_path;
    std::string teacher_path;
    std::string target_code;
    std::string model_kind;
    std::string out_name = "eval.csv";
    std::string tag;
    bool create_new = false;
    bool merge_out = false;
    double gamma_override = -1.0;
    long long rank_override = -1;

    auto* c_train = app.add_subcommand("train", "train a backbone on the configured code mixture");
    c_train->add_option("--config", config_path, "run config JSON")->required();

    auto* c_prune = app.add_subcommand("prune", "score, select, and compact a pruned model");
    c_prune->add_option("--config", config_path, "run config JSON")->required();
    c_prune->add_option("--checkpoint", checkpoint_path, "backbone checkpoint")->required();
    c_prune->add_option("--use-mask", mask_path, "apply this mask file instead of deriving one");

    auto* c_sap = app.add_subcommand("sap", "select or create a mask via the spectral library");
    c_sap->add_option("--config", config_path, "run config JSON")->required();
    c_sap->add_option("--library", library_path, "library JSON file")->required();
    c_sap->add_option("--target", target_code, "target code (catalog name or alist path)")
        ->required();
    c_sap->add_option("--checkpoint", checkpoint_path, "backbone checkpoint")->required();
    c_sap->add_flag("--new", create_new, "start a fresh library if the file does not exist");

    auto* c_recover = app.add_subcommand("recover", "train adapters on a pruned model");
    c_recover->add_option("--config", config_path, "run config JSON")->required();
    c_recover->add_option("--pruned", pruned_path, "pruned (student) checkpoint")->required();
    c_recover->add_option("--teacher", teacher_path, "unpruned (teacher) checkpoint")->required();
    c_recover->add_flag("--merge", merge_out, "also write a merged checkpoint");
    c_recover->add_option("--gamma", gamma_override, "override distillation weight");
    c_recover->add_option("--rank", rank_override, "override adapter rank");
    c_recover->add_option("--tag", tag, "suffix for output file names (sweeps)");

    auto* c_eval = app.add_subcommand("eval", "Monte-Carlo BER/FER over the configured SNR list");
    c_eval->add_option("--config", config_path, "run config JSON")->required();
    c_eval->add_option("--model", model_kind, "hard | bp | ckpt")->required();
    c_eval->add_option("--checkpoint", checkpoint_path, "checkpoint for --model ckpt");
    c_eval->add_option("--adapters", adapters_path, "adapter file applied on top of --checkpoint");
    c_eval->add_option("--out", out_name, "output CSV name");

    auto* c_corr = app.add_subcommand("correlate",
                                      "spectral similarity vs dedicated-mask overlap study");
    c_corr->add_option("--config", config_path, "run config JSON")->required();

    auto* c_lib = app.add_subcommand("library", "inspect or edit a mask library");
    c_lib->require_subcommand(1);
    auto* c_show = c_lib->add_subcommand("show", "print header and entries");
    c_show->add_option("--library", library_path, "library JSON file")->required();
    auto* c_add = c_lib->add_subcommand("add", "append an entry from a code and a mask file");
    c_add->add_option("--config", config_path, "run config JSON")->required();
    c_add->add_option("--library", library_path, "library JSON file")->required();
    c_add->add_option("--code", target_code, "code (catalog name or alist path)")->required();
    c_add->add_option("--mask", mask_path, "mask JSON file")->required();
    c_add->add_flag("--new", create_new, "start a fresh library if the file does not exist");

    auto* c_catalog = app.add_subcommand("catalog", "list built-in codes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (c_catalog->parsed()) {
        for (const auto& name : sap::catalog_names()) {
            const sap::LinearCode& code = sap::catalog_get(name);
            std::printf("%-16s %-8s n=%-3zu k=%-3zu rate=%.3f\n", name.c_str(),
                        sap::family_name(code.family()), code.n(), code.k(), code.rate());
        }
        return 0;
    }

    if (c_show->parsed()) {
        std::fputs(sap::cmd_library_show(library_path).c_str(), stdout);
        return 0;
    }

    const sap::RunConfig cfg = sap::load_run_config(config_path);

    if (c_train->parsed()) {
        const sap::TrainOutcome out = sap::cmd_train(cfg);
        std::printf("checkpoint: %s\n", out.checkpoint_path.c_str());
        std::printf("loss trace: %s (%zu epochs, final %.6f)\n", out.trace_path.c_str(),
                    out.epoch_loss.size(), out.epoch_loss.back());
    } else if (c_prune->parsed()) {
        const auto reports = sap::cmd_prune(cfg, checkpoint_path, mask_path);
        for (const auto& r : reports)
            std::printf("target=%.0f%% achieved=%.2f%% flops %.0f -> %.0f params %zu -> %zu "
                        "(mask %s)\n",
                        r.target_ratio * 100.0, r.achieved_ratio * 100.0, r.full_flops,
                        r.pruned_flops, r.full_params, r.pruned_params, r.mask_path.c_str());
    } else if (c_sap->parsed()) {
        const sap::SapOutcome out =
            sap::cmd_sap(cfg, library_path, target_code, checkpoint_path, create_new);
        std::printf("decision=%s kappa_star=%.9f index=%s entries=%zu\n",
                    sap::decision_name(out.decision), out.kappa_star,
                    out.index ? std::to_string(*out.index).c_str() : "-", out.library_entries);
        std::printf("mask: %s\n", out.mask_path.c_str());
    } else if (c_recover->parsed()) {
        sap::RunConfig rc = cfg;
        if (gamma_override >= 0.0) rc.recover.gamma = gamma_override;
        if (rank_override > 0) rc.recover.rank = std::size_t(rank_override);
        const sap::RecoverOutcome out =
            sap::cmd_recover(rc, pruned_path, teacher_path, merge_out, tag);
        std::printf("adapters: %s (%.2f%% of backbone params)\n", out.adapters_path.c_str(),
                    100.0 * out.adapter_params / out.backbone_params);
        if (!out.merged_path.empty()) std::printf("merged: %s\n", out.merged_path.c_str());
    } else if (c_eval->parsed()) {
        sap::EvalModelSpec spec;
        if (model_kind == "hard") {
            spec.kind = sap::EvalModelSpec::Kind::Hard;
        } else if (model_kind == "bp") {
            spec.kind = sap::EvalModelSpec::Kind::Bp;
        } else if (model_kind == "ckpt") {
            spec.kind = sap::EvalModelSpec::Kind::Checkpoint;
            if (checkpoint_path.empty())
                throw sap::ConfigError("--model ckpt requires --checkpoint");
            spec.checkpoint_path = checkpoint_path;
            spec.adapters_path = adapters_path;
        } else {
            throw sap::ConfigError("--model must be one of hard, bp, ckpt");
        }
        const sap::EvalOutcome out = sap::cmd_eval(cfg, spec, out_name);
        for (const auto& p : out.points)
            std::printf("ebn0=%5.2f dB  ber=%.6g  fer=%.6g  frames=%llu\n", p.ebn0_db, p.ber,
                        p.fer, static_cast<unsigned long long>(p.frames));
        std::printf("csv: %s\n", out.csv_path.c_str());
    } else if (c_corr->parsed()) {
        const sap::CorrelateOutcome out = sap::cmd_correlate(cfg);
        std::printf("points=%zu rho_adjacency=%.4f rho_laplacian=%.4f rho_wd=%.4f\n",
                    out.rows.size(), out.rho_adjacency, out.rho_laplacian, out.rho_wd);
        std::printf("scatter: %s\nsummary: %s\n", out.scatter_path.c_str(),
                    out.summary_path.c_str());
    } else if (c_add->parsed()) {
        const std::size_t n =
            sap::cmd_library_add(cfg, library_path, target_code, mask_path, create_new);
        std::printf("library %s now has %zu entries\n", library_path.c_str(), n);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
