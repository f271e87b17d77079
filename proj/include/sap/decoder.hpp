#pragma once

// ECCT-style toy transformer decoder. One backbone serves every code:
// tokens are scalars (magnitudes, then syndrome signs) embedded by type,
// and code structure enters only through a binary attention mask built
// from the parity checks. Gradients are exact reverse-mode, written out
// by hand so that head and channel gates expose their own gradients for
// Fisher scoring.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "gf2.hpp"
#include "mask.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace sap {

// Attention connectivity: self, variable-check incidence (both directions),
// variables sharing a check, checks sharing a variable.
inline std::vector<std::uint8_t> build_attention_mask(const ParityCheckMatrix& pcm) {
    const std::size_t n = pcm.bit_count();
    const std::size_t m = pcm.check_count();
    const std::size_t s = n + m;
    std::vector<std::uint8_t> allow(s * s, 0);
    auto set = [&](std::size_t i, std::size_t j) { allow[i * s + j] = 1; };

    for (std::size_t i = 0; i < s; ++i) set(i, i);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (pcm.get(r, c)) {
                set(c, n + r);
                set(n + r, c);
            }
    // variables sharing a check
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c1 = 0; c1 < n; ++c1)
            if (pcm.get(r, c1))
                for (std::size_t c2 = 0; c2 < n; ++c2)
                    if (pcm.get(r, c2)) set(c1, c2);
    // checks sharing a variable
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r1 = 0; r1 < m; ++r1)
            if (pcm.get(r1, c))
                for (std::size_t r2 = 0; r2 < m; ++r2)
                    if (pcm.get(r2, c)) set(n + r1, n + r2);
    return allow;
}

// Token sequence: |y| at the n variable positions, then the hard-decision
// syndrome mapped {0,1} -> {+1,-1}. Invariant to which codeword was sent.
inline Vector tokenize(const ParityCheckMatrix& pcm, const Vector& y) {
    if (y.size() != pcm.bit_count())
        throw std::invalid_argument("tokenize: y length " + std::to_string(y.size()) +
                                    " does not match code length " +
                                    std::to_string(pcm.bit_count()));
    std::vector<std::uint8_t> hard(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) hard[i] = y[i] < 0.0 ? 1 : 0;
    const auto syn = syndrome(pcm, hard);

    Vector tokens(y.size() + syn.size());
    for (std::size_t i = 0; i < y.size(); ++i) tokens[i] = std::abs(y[i]);
    for (std::size_t i = 0; i < syn.size(); ++i) tokens[y.size() + i] = syn[i] ? -1.0 : 1.0;
    return tokens;
}

struct LayerWeights {
    std::size_t heads = 0;  // may shrink per layer after compaction
    std::size_t d_ffn = 0;
    Matrix w_q, w_k, w_v;   // (heads*head_dim) x d_model
    Matrix w_o;             // d_model x (heads*head_dim)
    Matrix ffn_in;          // d_ffn x d_model
    Matrix ffn_out;         // d_model x d_ffn
    Vector ln1_scale, ln1_offset, ln2_scale, ln2_offset;
};

struct DecoderModel {
    DecoderArchitecture arch;  // reference architecture; head_dim comes from here
    std::vector<LayerWeights> layers;
    Vector emb_mag, emb_syn;       // type embeddings, d_model each
    Vector lnf_scale, lnf_offset;  // final layernorm
    Vector out_w;                  // output head d_model -> 1
    double out_b = 0.0;
    StructuredMask active_mask;    // sized to the per-layer dims

    std::size_t head_dim() const { return arch.head_dim(); }

    std::size_t param_count() const {
        std::size_t c = emb_mag.size() + emb_syn.size() + lnf_scale.size() + lnf_offset.size() +
                        out_w.size() + 1;
        for (const auto& l : layers)
            c += l.w_q.data.size() + l.w_k.data.size() + l.w_v.data.size() + l.w_o.data.size() +
                 l.ffn_in.data.size() + l.ffn_out.data.size() + l.ln1_scale.size() +
                 l.ln1_offset.size() + l.ln2_scale.size() + l.ln2_offset.size();
        return c;
    }
};

inline DecoderModel make_decoder(const DecoderArchitecture& arch, std::uint64_t seed) {
    arch.validate();
    Rng rng = derive_rng(seed, "init");
    auto fill_uniform = [&rng](auto& container, double bound) {
        for (auto& v : container) v = rng.next_uniform(-bound, bound);
    };

    DecoderModel m;
    m.arch = arch;
    const std::size_t d = arch.d_model;

    m.emb_mag.assign(d, 0.0);
    m.emb_syn.assign(d, 0.0);
    fill_uniform(m.emb_mag, 1.0);
    fill_uniform(m.emb_syn, 1.0);

    m.layers.resize(arch.layers);
    for (auto& l : m.layers) {
        l.heads = arch.heads;
        l.d_ffn = arch.d_ffn;
        const std::size_t hd = arch.heads * arch.head_dim();
        const double attn_bound = std::sqrt(6.0 / double(d + hd));
        const double ffn_bound = std::sqrt(6.0 / double(d + arch.d_ffn));
        l.w_q = Matrix(hd, d);
        l.w_k = Matrix(hd, d);
        l.w_v = Matrix(hd, d);
        l.w_o = Matrix(d, hd);
        fill_uniform(l.w_q.data, attn_bound);
        fill_uniform(l.w_k.data, attn_bound);
        fill_uniform(l.w_v.data, attn_bound);
        fill_uniform(l.w_o.data, attn_bound);
        l.ffn_in = Matrix(arch.d_ffn, d);
        l.ffn_out = Matrix(d, arch.d_ffn);
        fill_uniform(l.ffn_in.data, ffn_bound);
        fill_uniform(l.ffn_out.data, ffn_bound);
        l.ln1_scale.assign(d, 1.0);
        l.ln1_offset.assign(d, 0.0);
        l.ln2_scale.assign(d, 1.0);
        l.ln2_offset.assign(d, 0.0);
    }

    m.lnf_scale.assign(d, 1.0);
    m.lnf_offset.assign(d, 0.0);
    m.out_w.assign(d, 0.0);
    fill_uniform(m.out_w, std::sqrt(6.0 / double(d + 1)));
    m.out_b = 0.0;
    m.active_mask = StructuredMask::all_ones(arch);
    return m;
}

// Real-valued head/channel gates. Binary masks are the special case with
// bits cast to 0.0/1.0; Fisher scoring differentiates through these.
struct GateSet {
    std::vector<Vector> head;  // [layer][head]
    std::vector<Vector> ffn;   // [layer][channel]

    static GateSet from_mask(const StructuredMask& mask) {
        GateSet g;
        g.head.reserve(mask.head_bits.size());
        g.ffn.reserve(mask.ffn_bits.size());
        for (const auto& v : mask.head_bits) g.head.emplace_back(v.begin(), v.end());
        for (const auto& v : mask.ffn_bits) g.ffn.emplace_back(v.begin(), v.end());
        return g;
    }
};

namespace detail {

constexpr double kLnEps = 1e-5;

struct LayerCache {
    Matrix x_in;                     // S x d, layer input
    Matrix ln1_hat, ln1_out;         // S x d
    Vector ln1_invstd;               // S
    Matrix q, k, v;                  // S x (heads*head_dim)
    std::vector<Matrix> probs;       // per head, S x S
    Matrix ctx_raw;                  // S x (heads*head_dim), pre-gate
    Matrix x_mid;                    // S x d, after attention residual
    Matrix ln2_hat, ln2_out;
    Vector ln2_invstd;
    Matrix ffn_pre;                  // S x d_ffn
    Matrix ffn_act;                  // S x d_ffn, post-GELU pre-gate
};

struct ForwardCache {
    std::vector<LayerCache> layers;
    Matrix x_final;                  // input to final layernorm
    Matrix lnf_hat, lnf_out;
    Vector lnf_invstd;
    Vector logits;
};

inline void layer_norm_rows(const Matrix& x, const Vector& scale, const Vector& offset,
                            Matrix& hat, Matrix& out, Vector& invstd) {
    const std::size_t d = x.cols;
    hat = Matrix(x.rows, d);
    out = Matrix(x.rows, d);
    invstd.assign(x.rows, 0.0);
    for (std::size_t s = 0; s < x.rows; ++s) {
        const double* xr = x.row(s);
        double mean = 0.0;
        for (std::size_t j = 0; j < d; ++j) mean += xr[j];
        mean /= double(d);
        double var = 0.0;
        for (std::size_t j = 0; j < d; ++j) var += (xr[j] - mean) * (xr[j] - mean);
        var /= double(d);
        const double inv = 1.0 / std::sqrt(var + kLnEps);
        invstd[s] = inv;
        for (std::size_t j = 0; j < d; ++j) {
            hat.at(s, j) = (xr[j] - mean) * inv;
            out.at(s, j) = scale[j] * hat.at(s, j) + offset[j];
        }
    }
}

// Backward through y = scale .* xhat + offset for one layernorm call.
inline void layer_norm_backward(const Matrix& dy, const Matrix& hat, const Vector& invstd,
                                const Vector& scale, Matrix& dx, Vector& dscale, Vector& doffset) {
    const std::size_t d = hat.cols;
    dx = Matrix(hat.rows, d);
    for (std::size_t s = 0; s < hat.rows; ++s) {
        double sum_dxhat = 0.0, sum_dxhat_hat = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double g = dy.at(s, j);
            dscale[j] += g * hat.at(s, j);
            doffset[j] += g;
            const double dxhat = g * scale[j];
            sum_dxhat += dxhat;
            sum_dxhat_hat += dxhat * hat.at(s, j);
        }
        const double inv = invstd[s];
        for (std::size_t j = 0; j < d; ++j) {
            const double dxhat = dy.at(s, j) * scale[j];
            dx.at(s, j) = inv * (dxhat - sum_dxhat / double(d) -
                                 hat.at(s, j) * sum_dxhat_hat / double(d));
        }
    }
}

}  // namespace detail

// Precomputed per-code context so hot loops do not rebuild the mask.
struct CodeContext {
    const ParityCheckMatrix* pcm = nullptr;
    std::size_t n = 0, m = 0, seq_len = 0;
    std::vector<std::uint8_t> allow;

    explicit CodeContext(const ParityCheckMatrix& h)
        : pcm(&h), n(h.bit_count()), m(h.check_count()), seq_len(n + m),
          allow(build_attention_mask(h)) {}
};

inline void check_gates(const DecoderModel& model, const GateSet& gates) {
    if (gates.head.size() != model.layers.size() || gates.ffn.size() != model.layers.size())
        throw std::invalid_argument("gate set does not match layer count");
    for (std::size_t l = 0; l < model.layers.size(); ++l)
        if (gates.head[l].size() != model.layers[l].heads ||
            gates.ffn[l].size() != model.layers[l].d_ffn)
            throw std::invalid_argument("gate set does not match layer " + std::to_string(l) +
                                        " dimensions");
}

// Forward pass; fills `cache` when given (required later by backward).
inline Vector forward_gated(const DecoderModel& model, const CodeContext& ctx,
                            const Vector& tokens, const GateSet& gates,
                            detail::ForwardCache* cache = nullptr) {
    const std::size_t S = ctx.seq_len;
    const std::size_t d = model.arch.d_model;
    const std::size_t hd = model.head_dim();
    if (tokens.size() != S)
        throw std::invalid_argument("forward: token count " + std::to_string(tokens.size()) +
                                    " does not match 2n-k = " + std::to_string(S));
    check_gates(model, gates);

    Matrix x(S, d);
    for (std::size_t s = 0; s < S; ++s) {
        const Vector& emb = s < ctx.n ? model.emb_mag : model.emb_syn;
        for (std::size_t j = 0; j < d; ++j) x.at(s, j) = tokens[s] * emb[j];
    }

    if (cache) {
        cache->layers.clear();
        cache->layers.resize(model.layers.size());
    }
    detail::LayerCache scratch;

    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const LayerWeights& L = model.layers[li];
        detail::LayerCache& C = cache ? cache->layers[li] : scratch;
        const std::size_t heads = L.heads;
        const std::size_t width = heads * hd;

        C.x_in = x;
        detail::layer_norm_rows(x, L.ln1_scale, L.ln1_offset, C.ln1_hat, C.ln1_out, C.ln1_invstd);

        C.q = Matrix(S, width);
        C.k = Matrix(S, width);
        C.v = Matrix(S, width);
        for (std::size_t s = 0; s < S; ++s) {
            matvec_acc(L.w_q, C.ln1_out.row(s), C.q.row(s));
            matvec_acc(L.w_k, C.ln1_out.row(s), C.k.row(s));
            matvec_acc(L.w_v, C.ln1_out.row(s), C.v.row(s));
        }

        C.probs.assign(heads, Matrix(S, S));
        C.ctx_raw = Matrix(S, width);
        const double scale = 1.0 / std::sqrt(double(hd));
        for (std::size_t a = 0; a < heads; ++a) {
            const std::size_t off = a * hd;
            Matrix& P = C.probs[a];
            for (std::size_t s = 0; s < S; ++s) {
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t t = 0; t < S; ++t) {
                    if (!ctx.allow[s * S + t]) continue;
                    double sc = 0.0;
                    for (std::size_t j = 0; j < hd; ++j)
                        sc += C.q.at(s, off + j) * C.k.at(t, off + j);
                    sc *= scale;
                    P.at(s, t) = sc;
                    if (sc > best) best = sc;
                }
                double z = 0.0;
                for (std::size_t t = 0; t < S; ++t) {
                    if (!ctx.allow[s * S + t]) {
                        P.at(s, t) = 0.0;
                        continue;
                    }
                    P.at(s, t) = std::exp(P.at(s, t) - best);
                    z += P.at(s, t);
                }
                for (std::size_t t = 0; t < S; ++t)
                    if (ctx.allow[s * S + t]) P.at(s, t) /= z;
                for (std::size_t t = 0; t < S; ++t) {
                    const double p = P.at(s, t);
                    if (p == 0.0) continue;
                    for (std::size_t j = 0; j < hd; ++j)
                        C.ctx_raw.at(s, off + j) += p * C.v.at(t, off + j);
                }
            }
        }

        // head gates scale the per-head context before W_O aggregation
        Matrix gated(S, width);
        for (std::size_t a = 0; a < heads; ++a) {
            const double g = gates.head[li][a];
            const std::size_t off = a * hd;
            for (std::size_t s = 0; s < S; ++s)
                for (std::size_t j = 0; j < hd; ++j)
                    gated.at(s, off + j) = g * C.ctx_raw.at(s, off + j);
        }

        C.x_mid = C.x_in;
        for (std::size_t s = 0; s < S; ++s) matvec_acc(L.w_o, gated.row(s), C.x_mid.row(s));

        detail::layer_norm_rows(C.x_mid, L.ln2_scale, L.ln2_offset, C.ln2_hat, C.ln2_out,
                                C.ln2_invstd);

        C.ffn_pre = Matrix(S, L.d_ffn);
        for (std::size_t s = 0; s < S; ++s) matvec_acc(L.ffn_in, C.ln2_out.row(s), C.ffn_pre.row(s));
        C.ffn_act = Matrix(S, L.d_ffn);
        Matrix act_gated(S, L.d_ffn);
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t u = 0; u < L.d_ffn; ++u) {
                C.ffn_act.at(s, u) = gelu(C.ffn_pre.at(s, u));
                act_gated.at(s, u) = gates.ffn[li][u] * C.ffn_act.at(s, u);
            }

        x = C.x_mid;
        for (std::size_t s = 0; s < S; ++s) matvec_acc(L.ffn_out, act_gated.row(s), x.row(s));
    }

    Vector logits(ctx.n, 0.0);
    {
        detail::ForwardCache local;
        detail::ForwardCache& F = cache ? *cache : local;
        F.x_final = x;
        detail::layer_norm_rows(x, model.lnf_scale, model.lnf_offset, F.lnf_hat, F.lnf_out,
                                F.lnf_invstd);
        for (std::size_t j = 0; j < ctx.n; ++j) {
            double s = model.out_b;
            for (std::size_t c = 0; c < d; ++c) s += model.out_w[c] * F.lnf_out.at(j, c);
            logits[j] = s;
        }
        if (cache) F.logits = logits;
    }

    for (double v : logits)
        if (!std::isfinite(v))
            throw std::runtime_error("forward: non-finite activation in logits");
    return logits;
}

inline Vector forward(const DecoderModel& model, const CodeContext& ctx, const Vector& tokens,
                      detail::ForwardCache* cache = nullptr) {
    return forward_gated(model, ctx, tokens, GateSet::from_mask(model.active_mask), cache);
}

inline Vector forward(const DecoderModel& model, const ParityCheckMatrix& pcm,
                      const Vector& tokens) {
    CodeContext ctx(pcm);
    return forward(model, ctx, tokens);
}

// Logits estimate the multiplicative noise: positive logit = predicted flip.
inline std::vector<std::uint8_t> decode_bits(const ParityCheckMatrix& pcm, const Vector& y,
                                             const Vector& logits) {
    if (y.size() != pcm.bit_count() || logits.size() != pcm.bit_count())
        throw std::invalid_argument("decode_bits: length mismatch");
    std::vector<std::uint8_t> xhat = hard_decision(y);
    for (std::size_t j = 0; j < xhat.size(); ++j)
        if (logits[j] > 0.0) xhat[j] ^= 1;
    return xhat;
}

// Mean binary cross-entropy in the stable log-sum-exp form.
inline double bce_loss(const Vector& logits, const std::vector<std::uint8_t>& targets) {
    if (logits.size() != targets.size())
        throw std::invalid_argument("bce_loss: length mismatch");
    double total = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        const double l = logits[j];
        const double t = double(targets[j] & 1);
        total += std::max(l, 0.0) - l * t + std::log1p(std::exp(-std::abs(l)));
    }
    return total / double(logits.size());
}

// d(mean BCE)/d logit_j = (sigmoid(l_j) - t_j) / n.
inline Vector bce_loss_grad(const Vector& logits, const std::vector<std::uint8_t>& targets) {
    Vector g(logits.size());
    for (std::size_t j = 0; j < logits.size(); ++j)
        g[j] = (sigmoid(logits[j]) - double(targets[j] & 1)) / double(logits.size());
    return g;
}

// Gradient holder mirrors the model tensor layout exactly; the enumeration
// in tensor order below is shared by the optimizer and the checkpoint code.
inline DecoderModel zero_like(const DecoderModel& m) {
    DecoderModel z = m;
    auto clear = [](auto& c) { std::fill(c.begin(), c.end(), 0.0); };
    clear(z.emb_mag);
    clear(z.emb_syn);
    clear(z.lnf_scale);
    clear(z.lnf_offset);
    clear(z.out_w);
    z.out_b = 0.0;
    for (auto& l : z.layers) {
        clear(l.w_q.data);
        clear(l.w_k.data);
        clear(l.w_v.data);
        clear(l.w_o.data);
        clear(l.ffn_in.data);
        clear(l.ffn_out.data);
        clear(l.ln1_scale);
        clear(l.ln1_offset);
        clear(l.ln2_scale);
        clear(l.ln2_offset);
    }
    return z;
}

struct TensorRef {
    double* data;
    std::size_t size;
};

inline std::vector<TensorRef> tensor_refs(DecoderModel& m) {
    std::vector<TensorRef> refs;
    auto add = [&refs](Vector& v) { refs.push_back({v.data(), v.size()}); };
    auto addm = [&refs](Matrix& mm) { refs.push_back({mm.data.data(), mm.data.size()}); };
    add(m.emb_mag);
    add(m.emb_syn);
    for (auto& l : m.layers) {
        addm(l.w_q);
        addm(l.w_k);
        addm(l.w_v);
        addm(l.w_o);
        addm(l.ffn_in);
        addm(l.ffn_out);
        add(l.ln1_scale);
        add(l.ln1_offset);
        add(l.ln2_scale);
        add(l.ln2_offset);
    }
    add(m.lnf_scale);
    add(m.lnf_offset);
    add(m.out_w);
    refs.push_back({&m.out_b, 1});
    return refs;
}

// Per-sample gate gradients, the raw material for Fisher scores.
struct GateGrads {
    std::vector<Vector> head;
    std::vector<Vector> ffn;

    static GateGrads zeros_like(const DecoderModel& m) {
        GateGrads g;
        for (const auto& l : m.layers) {
            g.head.emplace_back(l.heads, 0.0);
            g.ffn.emplace_back(l.d_ffn, 0.0);
        }
        return g;
    }
};

// Reverse pass from d(loss)/d(logits). Accumulates into `grads` (so batch
// loops just keep calling it) and optionally reports gate gradients for
// this sample. Gates must match those used in the forward pass.
inline void backward_gated(const DecoderModel& model, const CodeContext& ctx,
                           const detail::ForwardCache& cache, const Vector& tokens,
                           const Vector& dlogits, const GateSet& gates, DecoderModel& grads,
                           GateGrads* gate_grads = nullptr) {
    const std::size_t S = ctx.seq_len;
    const std::size_t d = model.arch.d_model;
    const std::size_t hd = model.head_dim();
    if (dlogits.size() != ctx.n)
        throw std::invalid_argument("backward: dlogits length mismatch");
    if (cache.layers.size() != model.layers.size())
        throw std::invalid_argument("backward: cache does not match model");
    check_gates(model, gates);

    // output head
    Matrix dlnf_out(S, d);
    for (std::size_t j = 0; j < ctx.n; ++j) {
        const double g = dlogits[j];
        if (g == 0.0) continue;
        grads.out_b += g;
        for (std::size_t c = 0; c < d; ++c) {
            grads.out_w[c] += g * cache.lnf_out.at(j, c);
            dlnf_out.at(j, c) = g * model.out_w[c];
        }
    }

    Matrix dx;
    detail::layer_norm_backward(dlnf_out, cache.lnf_hat, cache.lnf_invstd, model.lnf_scale, dx,
                                grads.lnf_scale, grads.lnf_offset);

    for (std::size_t li = model.layers.size(); li-- > 0;) {
        const LayerWeights& L = model.layers[li];
        LayerWeights& G = grads.layers[li];
        const detail::LayerCache& C = cache.layers[li];
        const std::size_t heads = L.heads;
        const std::size_t width = heads * hd;

        // FFN block: x = x_mid + ffn_out * (g .* gelu(ffn_in * ln2))
        Matrix dact_gated(S, L.d_ffn);
        Matrix act_gated(S, L.d_ffn);
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t u = 0; u < L.d_ffn; ++u)
                act_gated.at(s, u) = gates.ffn[li][u] * C.ffn_act.at(s, u);
        for (std::size_t s = 0; s < S; ++s) {
            outer_acc(G.ffn_out, dx.row(s), act_gated.row(s));
            matvec_t_acc(L.ffn_out, dx.row(s), dact_gated.row(s));
        }

        Matrix dffn_pre(S, L.d_ffn);
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t u = 0; u < L.d_ffn; ++u) {
                const double da = dact_gated.at(s, u);
                if (gate_grads) gate_grads->ffn[li][u] += da * C.ffn_act.at(s, u);
                dffn_pre.at(s, u) = da * gates.ffn[li][u] * gelu_derivative(C.ffn_pre.at(s, u));
            }

        Matrix dln2_out(S, d);
        for (std::size_t s = 0; s < S; ++s) {
            outer_acc(G.ffn_in, dffn_pre.row(s), C.ln2_out.row(s));
            matvec_t_acc(L.ffn_in, dffn_pre.row(s), dln2_out.row(s));
        }

        Matrix dx_mid;
        detail::layer_norm_backward(dln2_out, C.ln2_hat, C.ln2_invstd, L.ln2_scale, dx_mid,
                                    G.ln2_scale, G.ln2_offset);
        for (std::size_t i = 0; i < dx_mid.data.size(); ++i) dx_mid.data[i] += dx.data[i];

        // attention block: x_mid = x_in + w_o * (g .* ctx_raw)
        Matrix dgated(S, width);
        Matrix gated(S, width);
        for (std::size_t a = 0; a < heads; ++a) {
            const double g = gates.head[li][a];
            const std::size_t off = a * hd;
            for (std::size_t s = 0; s < S; ++s)
                for (std::size_t j = 0; j < hd; ++j)
                    gated.at(s, off + j) = g * C.ctx_raw.at(s, off + j);
        }
        for (std::size_t s = 0; s < S; ++s) {
            outer_acc(G.w_o, dx_mid.row(s), gated.row(s));
            matvec_t_acc(L.w_o, dx_mid.row(s), dgated.row(s));
        }

        Matrix dctx_raw(S, width);
        for (std::size_t a = 0; a < heads; ++a) {
            const double g = gates.head[li][a];
            const std::size_t off = a * hd;
            double gg = 0.0;
            for (std::size_t s = 0; s < S; ++s)
                for (std::size_t j = 0; j < hd; ++j) {
                    const double dgj = dgated.at(s, off + j);
                    gg += dgj * C.ctx_raw.at(s, off + j);
                    dctx_raw.at(s, off + j) = dgj * g;
                }
            if (gate_grads) gate_grads->head[li][a] += gg;
        }

        Matrix dq(S, width), dk(S, width), dv(S, width);
        const double scale = 1.0 / std::sqrt(double(hd));
        for (std::size_t a = 0; a < heads; ++a) {
            const std::size_t off = a * hd;
            const Matrix& P = C.probs[a];
            for (std::size_t s = 0; s < S; ++s) {
                // dP then softmax backward within the allowed row support
                double dot = 0.0;
                Vector dp(S, 0.0);
                for (std::size_t t = 0; t < S; ++t) {
                    const double p = P.at(s, t);
                    if (p == 0.0) continue;
                    double acc = 0.0;
                    for (std::size_t j = 0; j < hd; ++j)
                        acc += dctx_raw.at(s, off + j) * C.v.at(t, off + j);
                    dp[t] = acc;
                    dot += p * acc;
                    for (std::size_t j = 0; j < hd; ++j)
                        dv.at(t, off + j) += p * dctx_raw.at(s, off + j);
                }
                for (std::size_t t = 0; t < S; ++t) {
                    const double p = P.at(s, t);
                    if (p == 0.0) continue;
                    const double dscore = p * (dp[t] - dot) * scale;
                    for (std::size_t j = 0; j < hd; ++j) {
                        dq.at(s, off + j) += dscore * C.k.at(t, off + j);
                        dk.at(t, off + j) += dscore * C.q.at(s, off + j);
                    }
                }
            }
        }

        Matrix dln1_out(S, d);
        for (std::size_t s = 0; s < S; ++s) {
            outer_acc(G.w_q, dq.row(s), C.ln1_out.row(s));
            outer_acc(G.w_k, dk.row(s), C.ln1_out.row(s));
            outer_acc(G.w_v, dv.row(s), C.ln1_out.row(s));
            matvec_t_acc(L.w_q, dq.row(s), dln1_out.row(s));
            matvec_t_acc(L.w_k, dk.row(s), dln1_out.row(s));
            matvec_t_acc(L.w_v, dv.row(s), dln1_out.row(s));
        }

        Matrix dx_in;
        detail::layer_norm_backward(dln1_out, C.ln1_hat, C.ln1_invstd, L.ln1_scale, dx_in,
                                    G.ln1_scale, G.ln1_offset);
        for (std::size_t i = 0; i < dx_in.data.size(); ++i) dx_in.data[i] += dx_mid.data[i];
        dx = std::move(dx_in);
    }

    // embeddings: x[s] = tokens[s] * emb_type(s)
    for (std::size_t s = 0; s < S; ++s) {
        Vector& demb = s < ctx.n ? grads.emb_mag : grads.emb_syn;
        for (std::size_t j = 0; j < d; ++j) demb[j] += tokens[s] * dx.at(s, j);
    }
}

inline void backward(const DecoderModel& model, const CodeContext& ctx,
                     const detail::ForwardCache& cache, const Vector& tokens,
                     const Vector& dlogits, DecoderModel& grads, GateGrads* gate_grads = nullptr) {
    backward_gated(model, ctx, cache, tokens, dlogits, GateSet::from_mask(model.active_mask), grads,
                   gate_grads);
}

}  // namespace sap
