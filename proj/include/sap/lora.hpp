#pragma once

// LoRA recovery: low-rank adapters on the attention projections of a
// pruned (compacted) backbone, trained against BCE plus a KL distillation
// term from the unpruned teacher. The backbone itself is never written.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "decoder.hpp"
#include "gf2.hpp"
#include "rng.hpp"
#include "tensor.hpp"
#include "train.hpp"

namespace sap {

enum class LoraTarget { Q = 0, K = 1, V = 2, O = 3 };

inline const char* lora_target_name(LoraTarget t) {
    switch (t) {
        case LoraTarget::Q: return "q";
        case LoraTarget::K: return "k";
        case LoraTarget::V: return "v";
        case LoraTarget::O: return "o";
    }
    return "?";
}

struct LoraAdapter {
    std::size_t layer = 0;
    LoraTarget kind = LoraTarget::Q;
    Matrix a;  // r x d_in
    Matrix b;  // d_out x r
};

struct LoraAdapterSet {
    std::size_t rank = 8;
    double alpha = 16.0;
    bool merged = false;
    std::vector<LoraAdapter> adapters;

    std::size_t param_count() const {
        std::size_t c = 0;
        for (const auto& ad : adapters) c += ad.a.data.size() + ad.b.data.size();
        return c;
    }
};

namespace detail {
inline const Matrix& target_weight(const LayerWeights& l, LoraTarget t) {
    switch (t) {
        case LoraTarget::Q: return l.w_q;
        case LoraTarget::K: return l.w_k;
        case LoraTarget::V: return l.w_v;
        case LoraTarget::O: return l.w_o;
    }
    throw std::logic_error("bad lora target");
}
inline Matrix& target_weight(LayerWeights& l, LoraTarget t) {
    return const_cast<Matrix&>(target_weight(const_cast<const LayerWeights&>(l), t));
}
}  // namespace detail

// Adapters for every attention projection of the model. Layers compacted
// down to zero heads have no projection left to adapt and are skipped.
// A is small-uniform, B is zero, so the initial update is exactly zero.
inline LoraAdapterSet make_adapters(const DecoderModel& model, std::size_t rank, double alpha,
                                    std::uint64_t seed) {
    if (rank < 1) throw std::invalid_argument("make_adapters: rank must be at least 1");
    Rng rng = derive_rng(seed, "lora-init");
    LoraAdapterSet set;
    set.rank = rank;
    set.alpha = alpha;
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const LayerWeights& L = model.layers[li];
        if (L.heads == 0) continue;
        for (LoraTarget t : {LoraTarget::Q, LoraTarget::K, LoraTarget::V, LoraTarget::O}) {
            const Matrix& w = detail::target_weight(L, t);
            const std::size_t d_out = w.rows, d_in = w.cols;
            if (rank > std::min(d_out, d_in) / 2)
                throw std::invalid_argument(
                    "make_adapters: rank " + std::to_string(rank) + " too large for layer " +
                    std::to_string(li) + " " + lora_target_name(t) + " of shape " +
                    std::to_string(d_out) + "x" + std::to_string(d_in) +
                    " (need rank <= min/2)");
            LoraAdapter ad;
            ad.layer = li;
            ad.kind = t;
            ad.a = Matrix(rank, d_in);
            ad.b = Matrix(d_out, rank);
            const double bound = std::sqrt(3.0 / double(d_in));
            for (double& v : ad.a.data) v = rng.next_uniform(-bound, bound);
            set.adapters.push_back(std::move(ad));
        }
    }
    return set;
}

// W' = W + (alpha/r) * B * A.
inline Matrix lora_forward(const Matrix& w, const LoraAdapter& ad, double alpha, std::size_t rank) {
    if (ad.b.rows != w.rows || ad.a.cols != w.cols || ad.a.rows != rank || ad.b.cols != rank)
        throw std::invalid_argument("lora_forward: adapter shape does not match weight " +
                                    std::to_string(w.rows) + "x" + std::to_string(w.cols));
    Matrix out = w;
    const double s = alpha / double(rank);
    for (std::size_t i = 0; i < w.rows; ++i)
        for (std::size_t r = 0; r < rank; ++r) {
            const double bs = s * ad.b.at(i, r);
            if (bs == 0.0) continue;
            for (std::size_t j = 0; j < w.cols; ++j) out.data[i * w.cols + j] += bs * ad.a.at(r, j);
        }
    return out;
}

// Materializes the backbone with all adapter deltas applied. Used both by
// the recovery loop (re-done after every optimizer step) and by inference
// on an unmerged adapter set.
inline DecoderModel effective_model(const DecoderModel& base, const LoraAdapterSet& set) {
    DecoderModel out = base;
    for (const auto& ad : set.adapters) {
        if (ad.layer >= out.layers.size())
            throw std::invalid_argument("effective_model: adapter layer out of range");
        Matrix& w = detail::target_weight(out.layers[ad.layer], ad.kind);
        w = lora_forward(w, ad, set.alpha, set.rank);
    }
    return out;
}

// Bitwise-posterior KL from teacher to student, mean over bits. Posteriors
// are clamped to [eps, 1-eps] before the logs.
inline double kd_loss(const Vector& teacher_logits, const Vector& student_logits, const Vector& y) {
    if (teacher_logits.size() != student_logits.size() || y.size() != teacher_logits.size())
        throw std::invalid_argument("kd_loss: length mismatch");
    constexpr double eps = 1e-7;
    double total = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double sgn = y[j] < 0.0 ? -1.0 : 1.0;
        double qt = sigmoid(sgn * teacher_logits[j]);
        double qs = sigmoid(sgn * student_logits[j]);
        qt = std::min(std::max(qt, eps), 1.0 - eps);
        qs = std::min(std::max(qs, eps), 1.0 - eps);
        total += qt * std::log(qt / qs) + (1.0 - qt) * std::log((1.0 - qt) / (1.0 - qs));
    }
    return total / double(y.size());
}

// d(kd_loss)/d(student_logit_j) = sign(y_j) * (q_s - q_t) / n, using the
// clamped posteriors.
inline Vector kd_loss_grad(const Vector& teacher_logits, const Vector& student_logits,
                           const Vector& y) {
    constexpr double eps = 1e-7;
    Vector g(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double sgn = y[j] < 0.0 ? -1.0 : 1.0;
        double qt = sigmoid(sgn * teacher_logits[j]);
        double qs = sigmoid(sgn * student_logits[j]);
        qt = std::min(std::max(qt, eps), 1.0 - eps);
        qs = std::min(std::max(qs, eps), 1.0 - eps);
        g[j] = sgn * (qs - qt) / double(y.size());
    }
    return g;
}

struct RecoveryConfig {
    double gamma = 1.0;
    std::size_t epochs = 20;
    std::size_t steps_per_epoch = 50;
    std::size_t batch_size = 128;
    std::size_t rank = 8;
    double alpha = 16.0;
    double lr_start = 1e-3;
    double lr_end = 1e-5;
    double snr_low_db = 2.0;
    double snr_high_db = 7.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (gamma < 0.0) throw std::invalid_argument("RecoveryConfig: gamma must be >= 0");
        if (epochs < 1 || steps_per_epoch < 1 || batch_size < 1 || rank < 1)
            throw std::invalid_argument("RecoveryConfig: counts must be at least 1");
        if (!(lr_start >= lr_end && lr_end > 0.0))
            throw std::invalid_argument("RecoveryConfig: need lr_start >= lr_end > 0");
        if (!(snr_low_db <= snr_high_db))
            throw std::invalid_argument("RecoveryConfig: snr_low_db must not exceed snr_high_db");
    }
};

struct RecoveryResult {
    LoraAdapterSet adapters;
    std::vector<double> epoch_loss;
};

namespace detail {
inline std::vector<TensorRef> adapter_refs(LoraAdapterSet& set) {
    std::vector<TensorRef> refs;
    for (auto& ad : set.adapters) {
        refs.push_back({ad.a.data.data(), ad.a.data.size()});
        refs.push_back({ad.b.data.data(), ad.b.data.size()});
    }
    return refs;
}
}  // namespace detail

// Trains adapters only. Weight gradients from the effective model map onto
// the factors as dA = (alpha/r) B^T dW and dB = (alpha/r) dW A^T; the
// student backbone is read, never written.
inline RecoveryResult recover(const DecoderModel& student, const DecoderModel& teacher,
                              const LinearCode& code, const RecoveryConfig& cfg) {
    cfg.validate();
    CodeContext ctx(code.pcm());

    RecoveryResult result;
    result.adapters = make_adapters(student, cfg.rank, cfg.alpha, cfg.seed);
    LoraAdapterSet& set = result.adapters;
    const double scale = cfg.alpha / double(cfg.rank);

    AdamOptimizer opt(detail::adapter_refs(set));

    LoraAdapterSet grad_set = set;  // same shapes, reused as the gradient holder
    auto zero_grads = [&grad_set]() {
        for (auto& ad : grad_set.adapters) {
            std::fill(ad.a.data.begin(), ad.a.data.end(), 0.0);
            std::fill(ad.b.data.begin(), ad.b.data.end(), 0.0);
        }
    };
    auto grad_refs = detail::adapter_refs(grad_set);

    const std::size_t total_steps = cfg.epochs * cfg.steps_per_epoch;
    detail::ForwardCache cache;
    DecoderModel weight_grads = zero_like(student);
    auto weight_grad_refs = tensor_refs(weight_grads);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_sum = 0.0;
        for (std::size_t se = 0; se < cfg.steps_per_epoch; ++se) {
            const std::size_t step = epoch * cfg.steps_per_epoch + se;
            const DecoderModel eff = effective_model(student, set);

            for (auto& r : weight_grad_refs) std::fill(r.data, r.data + r.size, 0.0);
            double batch_loss = 0.0;
            for (std::size_t b = 0; b < cfg.batch_size; ++b) {
                Rng rng = derive_rng(cfg.seed, "recover-sample", {step, b});
                TrainSample s = draw_train_sample(ctx, code.rate(), cfg.snr_low_db,
                                                  cfg.snr_high_db, rng);
                const Vector logits = forward(eff, ctx, s.tokens, &cache);
                Vector dlogits = bce_loss_grad(logits, s.flip_targets);
                double loss = bce_loss(logits, s.flip_targets);
                if (cfg.gamma > 0.0) {
                    const Vector t_logits = forward(teacher, ctx, s.tokens);
                    loss += cfg.gamma * kd_loss(t_logits, logits, s.y);
                    const Vector kd_g = kd_loss_grad(t_logits, logits, s.y);
                    for (std::size_t j = 0; j < dlogits.size(); ++j)
                        dlogits[j] += cfg.gamma * kd_g[j];
                }
                batch_loss += loss;
                for (double& g : dlogits) g /= double(cfg.batch_size);
                backward(eff, ctx, cache, s.tokens, dlogits, weight_grads);
            }
            batch_loss /= double(cfg.batch_size);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("recover: loss diverged (non-finite) at step " +
                                         std::to_string(step));

            zero_grads();
            for (std::size_t ai = 0; ai < set.adapters.size(); ++ai) {
                const LoraAdapter& ad = set.adapters[ai];
                LoraAdapter& gd = grad_set.adapters[ai];
                const Matrix& dw = detail::target_weight(weight_grads.layers[ad.layer], ad.kind);
                // dA = s * B^T dW ; dB = s * dW A^T
                for (std::size_t r = 0; r < cfg.rank; ++r)
                    for (std::size_t j = 0; j < dw.cols; ++j) {
                        double acc = 0.0;
                        for (std::size_t i = 0; i < dw.rows; ++i)
                            acc += ad.b.at(i, r) * dw.at(i, j);
                        gd.a.at(r, j) = scale * acc;
                    }
                for (std::size_t i = 0; i < dw.rows; ++i)
                    for (std::size_t r = 0; r < cfg.rank; ++r) {
                        double acc = 0.0;
                        for (std::size_t j = 0; j < dw.cols; ++j)
                            acc += dw.at(i, j) * ad.a.at(r, j);
                        gd.b.at(i, r) = scale * acc;
                    }
            }

            opt.step(grad_refs, cosine_lr(step, total_steps, cfg.lr_start, cfg.lr_end));
            epoch_sum += batch_loss;
        }
        result.epoch_loss.push_back(epoch_sum / double(cfg.steps_per_epoch));
    }
    return result;
}

// Folds the adapters into the backbone weights. Consuming: the set is
// flagged merged and a second merge of the same set is rejected, since
// applying the same delta twice would corrupt the weights silently.
inline DecoderModel merge(const DecoderModel& student, LoraAdapterSet& set) {
    if (set.merged) throw std::logic_error("merge: adapter set was already merged");
    DecoderModel out = effective_model(student, set);
    set.merged = true;
    return out;
}

}  // namespace sap
