#pragma once

// Backbone training: Adam with cosine learning-rate decay over all-zero
// codeword channel samples at per-sample uniform SNR. Deterministic given
// the seed; the sample substream depends only on (seed, step, batch slot).

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "decoder.hpp"
#include "gf2.hpp"
#include "rng.hpp"

namespace sap {

struct TrainConfig {
    std::size_t epochs = 40;
    std::size_t steps_per_epoch = 50;
    std::size_t batch_size = 128;
    double lr_start = 1e-3;
    double lr_end = 1e-5;
    double snr_low_db = 2.0;
    double snr_high_db = 7.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (epochs < 1 || steps_per_epoch < 1 || batch_size < 1)
            throw std::invalid_argument("TrainConfig: counts must be at least 1");
        if (!(lr_start >= lr_end && lr_end > 0.0))
            throw std::invalid_argument("TrainConfig: need lr_start >= lr_end > 0");
        if (!(snr_low_db <= snr_high_db))
            throw std::invalid_argument("TrainConfig: snr_low_db must not exceed snr_high_db");
    }
};

// Cosine decay hitting both endpoints exactly: step 0 -> lr_start, the
// final step -> lr_end.
inline double cosine_lr(std::size_t step, std::size_t total_steps, double lr_start, double lr_end) {
    if (total_steps <= 1) return lr_start;
    const double t = double(step) / double(total_steps - 1);
    return lr_end + 0.5 * (lr_start - lr_end) * (1.0 + std::cos(3.14159265358979323846 * t));
}

class AdamOptimizer {
public:
    AdamOptimizer(std::vector<TensorRef> params, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
        : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
        std::size_t total = 0;
        for (const auto& p : params_) total += p.size;
        m_.assign(total, 0.0);
        v_.assign(total, 0.0);
    }

    // grads must enumerate the same shapes in the same order as params.
    void step(const std::vector<TensorRef>& grads, double lr) {
        if (grads.size() != params_.size())
            throw std::invalid_argument("AdamOptimizer: gradient list mismatch");
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, double(t_));
        const double bc2 = 1.0 - std::pow(beta2_, double(t_));
        std::size_t off = 0;
        for (std::size_t i = 0; i < params_.size(); ++i) {
            if (grads[i].size != params_[i].size)
                throw std::invalid_argument("AdamOptimizer: tensor " + std::to_string(i) +
                                            " shape mismatch");
            double* p = params_[i].data;
            const double* g = grads[i].data;
            for (std::size_t j = 0; j < params_[i].size; ++j) {
                double& m = m_[off + j];
                double& v = v_[off + j];
                m = beta1_ * m + (1.0 - beta1_) * g[j];
                v = beta2_ * v + (1.0 - beta2_) * g[j] * g[j];
                p[j] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps_);
            }
            off += params_[i].size;
        }
    }

private:
    std::vector<TensorRef> params_;
    double beta1_, beta2_, eps_;
    std::vector<double> m_, v_;
    std::uint64_t t_ = 0;
};

// One channel sample for training or calibration: all-zero codeword, so
// y_j = 1 + sigma * z_j and the flip target is simply y_j < 0.
struct TrainSample {
    Vector y;
    Vector tokens;
    std::vector<std::uint8_t> flip_targets;
};

inline TrainSample draw_train_sample(const CodeContext& ctx, double rate, double snr_low_db,
                                     double snr_high_db, Rng& rng) {
    const double snr = rng.next_uniform(snr_low_db, snr_high_db);
    ChannelConfig cc;
    cc.ebn0_db = snr;
    cc.rate = rate;
    const double sigma = noise_sigma(cc);

    TrainSample s;
    s.y.resize(ctx.n);
    s.flip_targets.resize(ctx.n);
    for (std::size_t j = 0; j < ctx.n; ++j) {
        s.y[j] = 1.0 + sigma * rng.next_gaussian();
        s.flip_targets[j] = s.y[j] < 0.0 ? 1 : 0;
    }
    s.tokens = tokenize(*ctx.pcm, s.y);
    return s;
}

struct TrainResult {
    std::vector<double> epoch_loss;  // mean step loss per epoch
};

// Trains in place over a round-robin mixture of codes. Gradient
// accumulation order inside a batch is fixed, keeping runs bit-exact.
inline TrainResult train(DecoderModel& model, const std::vector<const LinearCode*>& codes,
                         const TrainConfig& cfg) {
    cfg.validate();
    if (codes.empty()) throw std::invalid_argument("train: need at least one code");
    for (const LinearCode* c : codes)
        if (!c) throw std::invalid_argument("train: null code");

    std::vector<CodeContext> ctxs;
    ctxs.reserve(codes.size());
    for (const LinearCode* c : codes) ctxs.emplace_back(c->pcm());

    AdamOptimizer opt(tensor_refs(model));
    DecoderModel grads = zero_like(model);
    auto grad_refs = tensor_refs(grads);

    const std::size_t total_steps = cfg.epochs * cfg.steps_per_epoch;
    TrainResult result;
    result.epoch_loss.reserve(cfg.epochs);

    detail::ForwardCache cache;
    std::size_t sample_counter = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_sum = 0.0;
        for (std::size_t se = 0; se < cfg.steps_per_epoch; ++se) {
            const std::size_t step = epoch * cfg.steps_per_epoch + se;

            for (auto& r : grad_refs) std::fill(r.data, r.data + r.size, 0.0);
            double batch_loss = 0.0;
            try {
                for (std::size_t b = 0; b < cfg.batch_size; ++b) {
                    const std::size_t ci = sample_counter++ % codes.size();
                    Rng rng = derive_rng(cfg.seed, "train-sample", {step, b});
                    TrainSample s = draw_train_sample(ctxs[ci], codes[ci]->rate(), cfg.snr_low_db,
                                                      cfg.snr_high_db, rng);
                    const Vector logits = forward(model, ctxs[ci], s.tokens, &cache);
                    batch_loss += bce_loss(logits, s.flip_targets);
                    Vector dlogits = bce_loss_grad(logits, s.flip_targets);
                    for (double& g : dlogits) g /= double(cfg.batch_size);
                    backward(model, ctxs[ci], cache, s.tokens, dlogits, grads);
                }
            } catch (const std::runtime_error& e) {
                // Non-finite activations surface from the forward guard;
                // report them as a divergence at this step.
                throw std::runtime_error("train: loss diverged at step " + std::to_string(step) +
                                         " (" + e.what() + ")");
            }
            batch_loss /= double(cfg.batch_size);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("train: loss diverged (non-finite) at step " +
                                         std::to_string(step));
            opt.step(grad_refs, cosine_lr(step, total_steps, cfg.lr_start, cfg.lr_end));
            epoch_sum += batch_loss;
        }
        result.epoch_loss.push_back(epoch_sum / double(cfg.steps_per_epoch));
    }
    return result;
}

inline TrainResult train(DecoderModel& model, const LinearCode& code, const TrainConfig& cfg) {
    return train(model, std::vector<const LinearCode*>{&code}, cfg);
}

// Evaluation adapter: the trained model as a channel decoder. The model
// and code must outlive the returned callable.
inline DecoderFn neural_decoder(const DecoderModel& model, const LinearCode& code) {
    auto ctx = std::make_shared<CodeContext>(code.pcm());
    const DecoderModel* m = &model;
    return [m, ctx](const std::vector<double>& y, double) {
        const Vector logits = forward(*m, *ctx, tokenize(*ctx->pcm, y));
        return decode_bits(*ctx->pcm, y, logits);
    };
}

}  // namespace sap
