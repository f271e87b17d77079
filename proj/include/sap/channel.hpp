#pragma once

// BPSK over AWGN plus Monte-Carlo BER/FER evaluation. Noise is drawn from
// substreams keyed by (seed, SNR point, frame), so a run's numbers do not
// depend on how frames are scheduled or batched.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2.hpp"
#include "rng.hpp"

namespace sap {

struct ChannelConfig {
    double ebn0_db = 0.0;
    double rate = 0.5;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(rate > 0.0 && rate < 1.0))
            throw std::invalid_argument("ChannelConfig: rate must lie in (0,1), got " +
                                        std::to_string(rate));
        if (!std::isfinite(ebn0_db))
            throw std::invalid_argument("ChannelConfig: ebn0_db must be finite");
    }
};

inline std::vector<double> modulate_bpsk(const std::vector<std::uint8_t>& bits) {
    std::vector<double> x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) x[i] = 1.0 - 2.0 * double(bits[i] & 1);
    return x;
}

// sigma^2 = 1 / (2 * rate * 10^(EbN0/10)), unit symbol energy.
inline double noise_sigma(const ChannelConfig& cfg) {
    cfg.validate();
    return std::sqrt(1.0 / (2.0 * cfg.rate * std::pow(10.0, cfg.ebn0_db / 10.0)));
}

inline std::vector<double> transmit(const ChannelConfig& cfg, const std::vector<double>& xs,
                                    Rng& stream) {
    const double sigma = noise_sigma(cfg);
    std::vector<double> y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = xs[i] + sigma * stream.next_gaussian();
    return y;
}

inline double q_function(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

inline std::vector<std::uint8_t> hard_decision(const std::vector<double>& y) {
    std::vector<std::uint8_t> bits(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) bits[i] = y[i] < 0.0 ? 1 : 0;
    return bits;
}

struct EvalPoint {
    double ebn0_db = 0.0;
    double ber = 0.0;
    double fer = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t seed = 0;
};

struct EvalOptions {
    std::uint64_t min_frames = 1000;
    std::uint64_t min_errors = 100;
    // Hard cap so perfect or near-perfect decoders terminate; hitting it
    // means the error-count target was abandoned, not that stats are exact.
    std::uint64_t max_frames = 10'000'000;
    bool random_codewords = false;
};

// decoder: (received vector, noise sigma) -> estimated codeword bits.
using DecoderFn = std::function<std::vector<std::uint8_t>(const std::vector<double>&, double)>;

// Runs frames per SNR point until frames >= min_frames and bit_errors >=
// min_errors (or the cap). All-zero codewords by default; the random
// codeword flag exists to check that this choice is statistically sound.
inline std::vector<EvalPoint> evaluate(const std::vector<ChannelConfig>& cfgs,
                                       const LinearCode& code, const DecoderFn& decoder,
                                       const EvalOptions& opt = {}) {
    if (opt.min_frames < 1)
        throw std::invalid_argument("evaluate: min_frames must be at least 1");
    std::vector<EvalPoint> out;
    out.reserve(cfgs.size());
    const std::size_t n = code.n();
    const std::size_t k = code.k();

    for (std::size_t pt = 0; pt < cfgs.size(); ++pt) {
        const ChannelConfig& cfg = cfgs[pt];
        const double sigma = noise_sigma(cfg);
        EvalPoint res;
        res.ebn0_db = cfg.ebn0_db;
        res.seed = cfg.seed;

        while (res.frames < opt.min_frames || res.bit_errors < opt.min_errors) {
            if (res.frames >= opt.max_frames) break;
            const std::uint64_t frame = res.frames;

            std::vector<std::uint8_t> cw(n, 0);
            if (opt.random_codewords) {
                Rng msg_rng = derive_rng(cfg.seed, "message", {pt, frame});
                std::vector<std::uint8_t> msg(k);
                for (auto& b : msg) b = std::uint8_t(msg_rng.next_u64() & 1);
                cw = code.encode_message(msg);
            }

            Rng noise_rng = derive_rng(cfg.seed, "channel", {pt, frame});
            const auto y = transmit(cfg, modulate_bpsk(cw), noise_rng);
            const auto xhat = decoder(y, sigma);
            if (xhat.size() != n)
                throw std::runtime_error("evaluate: decoder returned " +
                                         std::to_string(xhat.size()) + " bits, expected " +
                                         std::to_string(n) + " (point " + std::to_string(pt) +
                                         ", frame " + std::to_string(frame) + ")");

            std::uint64_t errs = 0;
            for (std::size_t j = 0; j < n; ++j) errs += (xhat[j] & 1) != (cw[j] & 1);
            res.bit_errors += errs;
            res.frame_errors += errs > 0;
            ++res.frames;
        }

        res.ber = double(res.bit_errors) / (double(res.frames) * double(n));
        res.fer = double(res.frame_errors) / double(res.frames);
        out.push_back(res);
    }
    return out;
}

}  // namespace sap
