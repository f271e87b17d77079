#pragma once

// Flooding sum-product belief propagation, the classical baseline. Check
// updates use the tanh rule; all messages clamp to [-30, 30] to keep the
// tanh/atanh pair away from saturation.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2.hpp"

namespace sap {

struct BpConfig {
    std::size_t max_iters = 50;
    bool early_stop = true;

    void validate() const {
        if (max_iters < 1) throw std::invalid_argument("BpConfig: max_iters must be at least 1");
    }
};

inline std::vector<double> channel_llr(const std::vector<double>& y, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("channel_llr: sigma must be positive");
    std::vector<double> llr(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) llr[j] = 2.0 * y[j] / (sigma * sigma);
    return llr;
}

struct BpResult {
    std::vector<std::uint8_t> xhat;
    bool converged = false;
    std::size_t iters_used = 0;
};

inline BpResult bp_decode(const ParityCheckMatrix& pcm, const std::vector<double>& llr,
                          const BpConfig& cfg = {}) {
    cfg.validate();
    const std::size_t n = pcm.bit_count();
    const std::size_t m = pcm.check_count();
    if (llr.size() != n)
        throw std::invalid_argument("bp_decode: llr length " + std::to_string(llr.size()) +
                                    " does not match code length " + std::to_string(n));

    // adjacency as edge lists
    std::vector<std::vector<std::size_t>> check_vars(m), var_checks(n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (pcm.get(r, c)) {
                check_vars[r].push_back(c);
                var_checks[c].push_back(r);
            }

    constexpr double kClamp = 30.0;
    auto clamp = [](double v) { return v < -kClamp ? -kClamp : (v > kClamp ? kClamp : v); };

    // messages indexed by (check, position within that check's var list)
    std::vector<std::vector<double>> v2c(m), c2v(m);
    for (std::size_t r = 0; r < m; ++r) {
        v2c[r].resize(check_vars[r].size());
        c2v[r].assign(check_vars[r].size(), 0.0);
        for (std::size_t e = 0; e < check_vars[r].size(); ++e)
            v2c[r][e] = clamp(llr[check_vars[r][e]]);
    }

    BpResult result;
    result.xhat.assign(n, 0);
    std::vector<double> posterior(n);

    for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
        // check update: tanh rule with exclusion of the target edge
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t deg = check_vars[r].size();
            std::vector<double> t(deg);
            for (std::size_t e = 0; e < deg; ++e) t[e] = std::tanh(0.5 * v2c[r][e]);
            for (std::size_t e = 0; e < deg; ++e) {
                double prod = 1.0;
                for (std::size_t f = 0; f < deg; ++f)
                    if (f != e) prod *= t[f];
                prod = std::min(std::max(prod, -0.9999999999999999), 0.9999999999999999);
                c2v[r][e] = clamp(2.0 * std::atanh(prod));
            }
        }

        // variable update and posterior
        for (std::size_t c = 0; c < n; ++c) posterior[c] = llr[c];
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t e = 0; e < check_vars[r].size(); ++e)
                posterior[check_vars[r][e]] += c2v[r][e];
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t e = 0; e < check_vars[r].size(); ++e)
                v2c[r][e] = clamp(posterior[check_vars[r][e]] - c2v[r][e]);

        for (std::size_t c = 0; c < n; ++c) result.xhat[c] = posterior[c] < 0.0 ? 1 : 0;
        result.iters_used = iter;

        if (cfg.early_stop && syndrome_is_zero(pcm, result.xhat)) {
            result.converged = true;
            return result;
        }
    }
    result.converged = syndrome_is_zero(pcm, result.xhat);
    return result;
}

}  // namespace sap
