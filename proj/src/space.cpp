#include "conc/space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "conc/numerics.hpp"
#include "conc/rng.hpp"

namespace conc {

namespace {

constexpr double kWeightSumRejectTol = 1e-9;

void validate_weights(std::vector<double>& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] >= 0.0) || !std::isfinite(w[i]))
            throw std::invalid_argument("space: negative or non-finite weight at index " +
                                        std::to_string(i));
    }
    double s = kahan_sum(w);
    if (std::fabs(s - 1.0) > kWeightSumRejectTol)
        throw std::invalid_argument("space: weights sum to " + std::to_string(s) +
                                    ", deviation exceeds 1e-9");
    if (s != 1.0) {
        for (double& x : w) x /= s;
    }
}

void validate_matrix_shape(const std::vector<std::string>& labels,
                           const std::vector<double>& d, const std::vector<double>& w) {
    std::size_t k = labels.size();
    if (k < 1) throw std::invalid_argument("space: needs at least one point");
    if (d.size() != k * k) throw std::invalid_argument("space: distance matrix is not k x k");
    if (w.size() != k) throw std::invalid_argument("space: weight count differs from label count");
}

void validate_metric(const std::vector<double>& d, std::size_t k, bool& fully_validated) {
    for (std::size_t i = 0; i < k; ++i) {
        if (d[i * k + i] != 0.0)
            throw std::invalid_argument("space: nonzero diagonal at point " + std::to_string(i));
        for (std::size_t j = i + 1; j < k; ++j) {
            double dij = d[i * k + j];
            if (!std::isfinite(dij)) throw std::invalid_argument("space: non-finite distance");
            if (dij != d[j * k + i])
                throw std::invalid_argument("space: distance matrix not symmetric at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            if (!(dij > 0.0))
                throw std::invalid_argument(
                    "space: off-diagonal distance must be strictly positive at (" +
                    std::to_string(i) + "," + std::to_string(j) +
                    "); duplicate points must be merged by the caller");
        }
    }
    auto check_triple = [&](std::size_t a, std::size_t b, std::size_t c) {
        if (d[a * k + c] > d[a * k + b] + d[b * k + c] + 1e-12 * (1.0 + d[a * k + c]))
            throw std::invalid_argument("space: triangle inequality violated at triple (" +
                                        std::to_string(a) + "," + std::to_string(b) + "," +
                                        std::to_string(c) + ")");
    };
    if (k <= 512) {
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                for (std::size_t c = 0; c < k; ++c) check_triple(a, b, c);
        fully_validated = true;
    } else {
        SplitMix64 rng(0x7a1a61eULL ^ static_cast<std::uint64_t>(k));
        std::size_t trials = 10 * k * k;
        for (std::size_t t = 0; t < trials; ++t) {
            std::size_t a = rng.next_index(k), b = rng.next_index(k), c = rng.next_index(k);
            check_triple(a, b, c);
        }
        fully_validated = false;
    }
}

}  // namespace

std::size_t SubsetMask::count() const {
    std::size_t c = 0;
    for (auto m : member) c += (m != 0);
    return c;
}

std::vector<std::size_t> SubsetMask::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < member.size(); ++i)
        if (member[i]) out.push_back(i);
    return out;
}

std::vector<std::size_t> ProbabilityVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) out.push_back(i);
    return out;
}

ProbabilityVector make_probability_vector(std::vector<double> entries) {
    if (entries.empty()) throw std::invalid_argument("probability vector: empty");
    validate_weights(entries);
    return ProbabilityVector{std::move(entries)};
}

double FiniteMetricProbabilitySpace::diameter() const {
    double m = 0.0;
    for (double x : distance) m = std::max(m, x);
    return m;
}

FiniteMetricProbabilitySpace build_finite(std::vector<std::string> labels,
                                          std::vector<double> distance,
                                          std::vector<double> weights) {
    validate_matrix_shape(labels, distance, weights);
    FiniteMetricProbabilitySpace s;
    validate_metric(distance, labels.size(), s.fully_validated);
    validate_weights(weights);
    s.labels = std::move(labels);
    s.distance = std::move(distance);
    s.weights = std::move(weights);
    return s;
}

FiniteMetricProbabilitySpace build_hypercube(int n) {
    if (n < 1 || n > kHypercubeMaxDim)
        throw std::invalid_argument("build_hypercube: n must be in [1, " +
                                    std::to_string(kHypercubeMaxDim) +
                                    "] (dense 2^n x 2^n materialization)");
    std::size_t k = std::size_t{1} << n;
    FiniteMetricProbabilitySpace s;
    s.labels.reserve(k);
    for (std::size_t x = 0; x < k; ++x) {
        std::string lab(static_cast<std::size_t>(n), '0');
        for (int b = 0; b < n; ++b)
            if (x & (std::size_t{1} << b)) lab[static_cast<std::size_t>(b)] = '1';
        s.labels.push_back(std::move(lab));
    }
    s.distance.resize(k * k);
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y)
            s.distance[x * k + y] = static_cast<double>(std::popcount(x ^ y));
    s.weights.assign(k, std::ldexp(1.0, -n));
    s.fully_validated = true;  // Hamming metric holds by construction
    s.known_sigma_sq = n / 4.0;
    return s;
}

SubsetMask build_chain_subset(int n) {
    if (n < 1 || n > kHypercubeMaxDim)
        throw std::invalid_argument("build_chain_subset: dimension out of range");
    std::size_t k = std::size_t{1} << n;
    SubsetMask m;
    m.member.assign(k, 0);
    for (int ones = 0; ones <= n; ++ones) m.member[(std::size_t{1} << ones) - 1] = 1;
    return m;
}

FiniteMetricProbabilitySpace build_product(const FiniteMetricProbabilitySpace& base, int n) {
    if (n < 1) throw std::invalid_argument("build_product: n must be >= 1");
    std::size_t kb = base.size();
    double kn = std::pow(static_cast<double>(kb), n);
    if (kn > 65536.0) throw std::invalid_argument("build_product: |base|^n exceeds 65536 points");
    std::size_t k = static_cast<std::size_t>(kn + 0.5);

    // decode point index into factor indices, last factor fastest
    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    auto decode = [&](std::size_t idx, std::vector<std::size_t>& out) {
        for (int t = n - 1; t >= 0; --t) {
            out[static_cast<std::size_t>(t)] = idx % kb;
            idx /= kb;
        }
    };

    FiniteMetricProbabilitySpace s;
    s.labels.reserve(k);
    s.weights.resize(k);
    std::vector<std::vector<std::size_t>> dec(k, std::vector<std::size_t>(static_cast<std::size_t>(n)));
    for (std::size_t x = 0; x < k; ++x) {
        decode(x, dec[x]);
        std::string lab;
        double w = 1.0;
        for (int t = 0; t < n; ++t) {
            if (t) lab += '|';
            lab += base.labels[dec[x][static_cast<std::size_t>(t)]];
            w *= base.weights[dec[x][static_cast<std::size_t>(t)]];
        }
        s.labels.push_back(std::move(lab));
        s.weights[x] = w;
    }
    s.distance.resize(k * k);
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y) {
            double d = 0.0;
            for (int t = 0; t < n; ++t)
                d += base.d(dec[x][static_cast<std::size_t>(t)], dec[y][static_cast<std::size_t>(t)]);
            s.distance[x * k + y] = d;
        }
    double ws = kahan_sum(s.weights);
    if (ws != 1.0)
        for (double& w : s.weights) w /= ws;
    s.fully_validated = base.fully_validated;  // ell^1 sum of metrics is a metric
    return s;
}

RestrictedSpace restrict_space(const FiniteMetricProbabilitySpace& space, const SubsetMask& mask) {
    if (mask.size() != space.size())
        throw std::invalid_argument("restrict: mask size differs from space size");
    std::vector<std::size_t> idx = mask.indices();
    if (idx.empty()) throw std::invalid_argument("restrict: empty mask");
    KahanSum mass;
    for (std::size_t i : idx) mass.add(space.weights[i]);
    double mu_a = mass.value();
    if (!(mu_a > 0.0))
        throw std::invalid_argument("restrict: subset has zero mass (mu(A) > 0 required)");

    std::size_t m = idx.size(), k = space.size();
    RestrictedSpace out;
    out.subset_mass = mu_a;
    out.original_index = idx;
    out.space.labels.reserve(m);
    out.space.weights.resize(m);
    out.space.distance.resize(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        out.space.labels.push_back(space.labels[idx[a]]);
        out.space.weights[a] = space.weights[idx[a]] / mu_a;
        for (std::size_t b = 0; b < m; ++b)
            out.space.distance[a * m + b] = space.distance[idx[a] * k + idx[b]];
    }
    out.space.fully_validated = space.fully_validated;
    return out;
}

InducedGraphMetric induced_graph_metric(const FiniteMetricProbabilitySpace& hypercube,
                                        int n, const SubsetMask& mask) {
    std::size_t k = std::size_t{1} << n;
    if (hypercube.size() != k || mask.size() != k)
        throw std::invalid_argument("induced_graph_metric: dimensions inconsistent");
    std::vector<std::size_t> idx = mask.indices();
    if (idx.empty()) throw std::invalid_argument("induced_graph_metric: empty mask");
    std::size_t m = idx.size();
    std::vector<std::size_t> pos(k, static_cast<std::size_t>(-1));
    for (std::size_t a = 0; a < m; ++a) pos[idx[a]] = a;

    const double inf = std::numeric_limits<double>::infinity();
    InducedGraphMetric out;
    out.n_points = m;
    out.original_index = idx;
    out.distance.assign(m * m, inf);
    out.component.assign(m, -1);

    // BFS from every source inside A along coordinate-flip edges
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < m; ++s) {
        out.distance[s * m + s] = 0.0;
        queue.clear();
        queue.push_back(idx[s]);
        std::vector<double> dist(k, -1.0);
        dist[idx[s]] = 0.0;
        while (!queue.empty()) {
            std::size_t x = queue.front();
            queue.pop_front();
            for (int b = 0; b < n; ++b) {
                std::size_t y = x ^ (std::size_t{1} << b);
                if (pos[y] == static_cast<std::size_t>(-1) || dist[y] >= 0.0) continue;
                dist[y] = dist[x] + 1.0;
                out.distance[s * m + pos[y]] = dist[y];
                queue.push_back(y);
            }
        }
    }

    int comp = 0;
    for (std::size_t a = 0; a < m; ++a) {
        if (out.component[a] >= 0) continue;
        for (std::size_t b = 0; b < m; ++b)
            if (std::isfinite(out.distance[a * m + b])) out.component[b] = comp;
        ++comp;
    }
    out.connected = (comp == 1);
    return out;
}

bool is_monotone(const SubsetMask& mask, int n) {
    std::size_t k = std::size_t{1} << n;
    if (mask.size() != k) throw std::invalid_argument("is_monotone: mask size is not 2^n");
    for (std::size_t x = 0; x < k; ++x) {
        if (!mask.member[x]) continue;
        for (int b = 0; b < n; ++b) {
            std::size_t y = x | (std::size_t{1} << b);
            if (!mask.member[y]) return false;
        }
    }
    return true;
}

std::vector<SubsetMask> enumerate_monotone_masks(int n) {
    if (n < 0 || n > 4) throw std::invalid_argument("enumerate_monotone_masks: intended for n <= 4");
    std::size_t k = std::size_t{1} << n;
    std::vector<SubsetMask> out;
    for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
        SubsetMask m;
        m.member.resize(k);
        for (std::size_t i = 0; i < k; ++i) m.member[i] = (bits >> i) & 1;
        if (is_monotone(m, n)) out.push_back(std::move(m));
    }
    return out;
}

}  // namespace conc
