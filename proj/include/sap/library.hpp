#pragma once

// The SAP mask library: spectral signatures paired with pruning masks,
// nearest-neighbor retrieval, and the threshold reuse rule. Entries are
// append-only; retrieval is purely spectral (labels are provenance only).

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gf2.hpp"
#include "mask.hpp"
#include "spectrum.hpp"

namespace sap {

struct LibraryEntry {
    SpectralSignature signature;
    StructuredMask mask;
    std::string code_label;
    std::string created_at;
};

struct RetrievalResult {
    std::size_t index = 0;
    double distance = 0.0;
    double similarity = 0.0;
};

enum class SelectDecision { Reused, Created };

inline const char* decision_name(SelectDecision d) {
    return d == SelectDecision::Reused ? "REUSED" : "CREATED";
}

struct SelectResult {
    StructuredMask mask;
    SelectDecision decision = SelectDecision::Created;
    double kappa_star = 0.0;                 // 0 when the library was empty
    std::optional<std::size_t> index;        // matched entry for REUSED
};

class MaskLibrary {
public:
    MaskLibrary(std::size_t k, double tau, double beta, DecoderArchitecture arch)
        : k_(k), tau_(tau), beta_(beta), arch_(arch) {
        if (k_ < 1) throw std::invalid_argument("MaskLibrary: K must be at least 1");
        if (!(tau_ > 0.0 && tau_ <= 1.0))
            throw std::invalid_argument("MaskLibrary: tau must lie in (0,1]");
        if (!(beta_ > 0.0)) throw std::invalid_argument("MaskLibrary: beta must be positive");
        arch_.validate();
    }

    std::size_t k() const { return k_; }
    double tau() const { return tau_; }
    double beta() const { return beta_; }
    const DecoderArchitecture& arch() const { return arch_; }
    const std::vector<LibraryEntry>& entries() const { return entries_; }

    RetrievalResult retrieve(const SpectralSignature& sig) const {
        if (entries_.empty())
            throw std::runtime_error(
                "retrieve: library is empty; use select_or_create to seed the first entry");
        if (sig.k_used != k_)
            throw std::invalid_argument("retrieve: signature K " + std::to_string(sig.k_used) +
                                        " does not match library K " + std::to_string(k_));
        RetrievalResult best;
        best.index = 0;
        best.distance = spectral_distance(sig, entries_[0].signature);
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            const double d = spectral_distance(sig, entries_[i].signature);
            if (d < best.distance) {  // strict: equal distances keep the lower index
                best.distance = d;
                best.index = i;
            }
        }
        best.similarity = spectral_similarity(best.distance, {beta_, SpectralMetric::Adjacency});
        return best;
    }

    // The reuse rule: retrieve the nearest stored signature; reuse its mask
    // when kappa* >= tau (boundary reuses), otherwise derive a fresh mask
    // and append it. An empty library always takes the create path. The
    // library is left untouched if the callback throws.
    SelectResult select_or_create(const ParityCheckMatrix& pcm,
                                  const std::function<StructuredMask(const ParityCheckMatrix&)>& derive_mask,
                                  const std::string& label, const std::string& created_at) {
        const SpectralSignature sig = spectral_signature(pcm, k_);
        SelectResult res;
        if (!entries_.empty()) {
            const RetrievalResult hit = retrieve(sig);
            res.kappa_star = hit.similarity;
            if (hit.similarity >= tau_) {
                res.mask = entries_[hit.index].mask;
                res.decision = SelectDecision::Reused;
                res.index = hit.index;
                return res;
            }
        }
        StructuredMask mask = derive_mask(pcm);
        append_entry({sig, mask, label, created_at});
        res.mask = std::move(mask);
        res.decision = SelectDecision::Created;
        res.index = entries_.size() - 1;
        return res;
    }

    // Direct insertion path (used by deserialization and the CLI). Rejects
    // shape-inconsistent entries and signature duplicates, which retrieval
    // could never produce but hand-edited files might.
    void append_entry(LibraryEntry entry) {
        if (entry.signature.k_used != k_)
            throw std::invalid_argument("append_entry: signature K mismatch");
        if (!entry.mask.matches(arch_))
            throw std::invalid_argument("append_entry: mask does not match library architecture");
        entry.mask.validate_bits();
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (spectral_distance(entry.signature, entries_[i].signature) < 1e-12)
                throw std::invalid_argument("append_entry: duplicate signature of entry " +
                                            std::to_string(i) + " ('" + entries_[i].code_label +
                                            "')");
        entries_.push_back(std::move(entry));
    }

private:
    std::size_t k_;
    double tau_;
    double beta_;
    DecoderArchitecture arch_;
    std::vector<LibraryEntry> entries_;
};

}  // namespace sap
