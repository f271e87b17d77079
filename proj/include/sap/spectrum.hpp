#pragma once

// Spectral signatures of Tanner graphs. The adjacency route is the main
// similarity metric; the degree-Wasserstein and normalized-Laplacian
// routes are alternates kept for correlation studies.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2.hpp"
#include "jacobi.hpp"

namespace sap {

// Adjacency of the bipartite Tanner graph, variables first then checks:
// [[0, H^T], [H, 0]], dimension n + m = 2n - k for a full-rank H.
inline SquareMatrix bipartite_adjacency(const ParityCheckMatrix& pcm) {
    const std::size_t n = pcm.bit_count();
    const std::size_t m = pcm.check_count();
    SquareMatrix adj(n + m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (pcm.get(r, c)) {
                adj.at(c, n + r) = 1.0;
                adj.at(n + r, c) = 1.0;
            }
    return adj;
}

struct SpectralSignature {
    std::vector<double> values;  // length k_used
    std::size_t k_used = 0;
    std::size_t source_n = 0;
    std::size_t source_k = 0;
};

// Order by decreasing magnitude. Bipartite spectra come in +/- pairs whose
// computed magnitudes differ by rounding noise, so equal-magnitude grouping
// uses a tolerance before the positive-first rule; otherwise the output
// order of a pair could flip between two runs of the same graph permuted.
inline void order_by_magnitude(std::vector<double>& vals) {
    std::sort(vals.begin(), vals.end(),
              [](double x, double y) { return std::abs(x) > std::abs(y); });
    std::size_t i = 0;
    while (i < vals.size()) {
        const double head = std::abs(vals[i]);
        const double tol = 1e-8 * std::max(1.0, head);
        std::size_t j = i + 1;
        while (j < vals.size() && head - std::abs(vals[j]) <= tol) ++j;
        std::sort(vals.begin() + long(i), vals.begin() + long(j), std::greater<double>());
        i = j;
    }
}

inline SpectralSignature spectral_signature(const ParityCheckMatrix& pcm, std::size_t K) {
    if (K < 1) throw std::invalid_argument("spectral_signature: K must be at least 1");
    auto eig = symmetric_eigenvalues(bipartite_adjacency(pcm));
    order_by_magnitude(eig);
    SpectralSignature sig;
    sig.k_used = K;
    sig.source_n = pcm.bit_count();
    sig.source_k = pcm.bit_count() - pcm.check_count();
    sig.values.assign(K, 0.0);
    for (std::size_t i = 0; i < K && i < eig.size(); ++i) sig.values[i] = eig[i];
    return sig;
}

inline double spectral_distance(const SpectralSignature& a, const SpectralSignature& b) {
    if (a.k_used != b.k_used)
        throw std::invalid_argument("spectral_distance: signature lengths differ (" +
                                    std::to_string(a.k_used) + " vs " + std::to_string(b.k_used) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        s += d * d;
    }
    return std::sqrt(s);
}

enum class SpectralMetric { Adjacency, Laplacian, DegreeWd };

struct SimilarityParams {
    double beta = 0.1;
    SpectralMetric metric = SpectralMetric::Adjacency;
};

inline double spectral_similarity(double distance, const SimilarityParams& params) {
    if (!(params.beta > 0.0))
        throw std::invalid_argument("spectral_similarity: beta must be positive");
    if (distance < 0.0)
        throw std::invalid_argument("spectral_similarity: distance must be nonnegative");
    return std::exp(-params.beta * distance);
}

// Median-calibrated beta: similarity at the median nonzero distance is 0.5.
// ln2/m alone lands within an ulp or two of that in floating point, so the
// result is nudged until exp(-beta*m) evaluates to 0.5 on the nose.
inline double calibrate_beta_median(std::vector<double> distances) {
    distances.erase(std::remove(distances.begin(), distances.end(), 0.0), distances.end());
    if (distances.empty())
        throw std::invalid_argument("calibrate_beta_median: no strictly positive distances");
    for (double d : distances)
        if (d < 0.0) throw std::invalid_argument("calibrate_beta_median: negative distance");
    std::sort(distances.begin(), distances.end());
    const std::size_t mid = distances.size() / 2;
    const double median = (distances.size() % 2 == 1)
                              ? distances[mid]
                              : 0.5 * (distances[mid - 1] + distances[mid]);

    double beta = std::log(2.0) / median;
    if (std::exp(-beta * median) == 0.5) return beta;
    double lo = beta, hi = beta;
    for (int step = 0; step < 64; ++step) {
        lo = std::nextafter(lo, 0.0);
        if (std::exp(-lo * median) == 0.5) return lo;
        hi = std::nextafter(hi, 2.0 * beta);
        if (std::exp(-hi * median) == 0.5) return hi;
    }
    throw std::runtime_error("calibrate_beta_median: could not hit 0.5 exactly at the median");
}

namespace detail {

// 1D Wasserstein-1 between two discrete distributions given as
// value -> probability maps, via the CDF-difference integral.
inline double wasserstein1(const std::map<double, double>& pa, const std::map<double, double>& pb) {
    std::vector<double> support;
    for (const auto& [v, _] : pa) support.push_back(v);
    for (const auto& [v, _] : pb) support.push_back(v);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    double w = 0.0, fa = 0.0, fb = 0.0;
    for (std::size_t i = 0; i + 1 < support.size(); ++i) {
        if (auto it = pa.find(support[i]); it != pa.end()) fa += it->second;
        if (auto it = pb.find(support[i]); it != pb.end()) fb += it->second;
        w += std::abs(fa - fb) * (support[i + 1] - support[i]);
    }
    return w;
}

// Edge-perspective degree distribution: each edge contributes the degree of
// its endpoint on the requested side, normalized over edges.
inline std::map<double, double> edge_degree_dist(const ParityCheckMatrix& pcm, bool var_side) {
    const std::size_t n = pcm.bit_count(), m = pcm.check_count();
    std::vector<std::size_t> var_deg(n, 0), chk_deg(m, 0);
    std::size_t edges = 0;
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (pcm.get(r, c)) {
                ++var_deg[c];
                ++chk_deg[r];
                ++edges;
            }
    if (edges == 0)
        throw std::invalid_argument("degree_wd_distance: matrix has no edges");
    std::map<double, double> dist;
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (pcm.get(r, c))
                dist[double(var_side ? var_deg[c] : chk_deg[r])] += 1.0 / double(edges);
    return dist;
}

}  // namespace detail

inline double degree_wd_distance(const ParityCheckMatrix& a, const ParityCheckMatrix& b) {
    const double dv = detail::wasserstein1(detail::edge_degree_dist(a, true),
                                           detail::edge_degree_dist(b, true));
    const double dc = detail::wasserstein1(detail::edge_degree_dist(a, false),
                                           detail::edge_degree_dist(b, false));
    return dv + dc;
}

// Smallest-K eigenvalues of the normalized Laplacian L = I - D^(-1/2) A D^(-1/2),
// ascending. Demands every variable and check to have degree >= 1; zeros pad
// the tail only when K exceeds the graph dimension.
inline SpectralSignature laplacian_signature(const ParityCheckMatrix& pcm, std::size_t K) {
    if (K < 1) throw std::invalid_argument("laplacian_signature: K must be at least 1");
    SquareMatrix adj = bipartite_adjacency(pcm);
    const std::size_t dim = adj.n;
    const std::size_t n = pcm.bit_count();

    std::vector<double> deg(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) deg[i] += adj.at(i, j);
    for (std::size_t i = 0; i < dim; ++i)
        if (deg[i] == 0.0)
            throw std::invalid_argument(
                "laplacian_signature: isolated " +
                std::string(i < n ? "variable " : "check ") +
                std::to_string(i < n ? i : i - n) + " (zero degree)");

    SquareMatrix lap(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j)
            lap.at(i, j) = -adj.at(i, j) / std::sqrt(deg[i] * deg[j]);
        lap.at(i, i) += 1.0;
    }

    auto eig = symmetric_eigenvalues(lap);       // descending
    std::reverse(eig.begin(), eig.end());        // ascending

    SpectralSignature sig;
    sig.k_used = K;
    sig.source_n = pcm.bit_count();
    sig.source_k = pcm.bit_count() - pcm.check_count();
    sig.values.assign(K, 0.0);
    for (std::size_t i = 0; i < K && i < eig.size(); ++i) sig.values[i] = eig[i];
    return sig;
}

}  // namespace sap
