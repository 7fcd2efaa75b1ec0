#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conc {

// A real-valued function on the points of a space.
using ScalarField = std::vector<double>;

// Boolean membership flags over the points of a space.
struct SubsetMask {
    std::vector<std::uint8_t> member;

    std::size_t size() const { return member.size(); }
    bool contains(std::size_t i) const { return member[i] != 0; }
    std::size_t count() const;
    std::vector<std::size_t> indices() const;
};

// Probability vector with explicit support bookkeeping.
struct ProbabilityVector {
    std::vector<double> p;

    std::size_t size() const { return p.size(); }
    std::vector<std::size_t> support() const;
};

// Validates nonnegativity and unit mass (rejects deviation > 1e-9, then
// renormalizes the residual rounding so downstream sums hold to 1e-12).
ProbabilityVector make_probability_vector(std::vector<double> entries);

// Finite metric probability space (M, d, mu).  Immutable after construction;
// all operations below return fresh spaces.
struct FiniteMetricProbabilitySpace {
    std::vector<std::string> labels;
    std::vector<double> distance;  // row-major k x k
    std::vector<double> weights;
    // false when the triangle inequality was only spot-checked (k > 512)
    bool fully_validated = true;
    // exact subgaussian constant when the construction implies one
    // (hypercube: n/4 by Marton's theorem)
    std::optional<double> known_sigma_sq;

    std::size_t size() const { return labels.size(); }
    double d(std::size_t i, std::size_t j) const { return distance[i * size() + j]; }
    double diameter() const;
};

// Validating constructor for user-supplied data.  Triangle inequality is
// checked over all triples for k <= 512 and over 10*k^2 random triples
// beyond that (fully_validated records which path ran).
FiniteMetricProbabilitySpace build_finite(std::vector<std::string> labels,
                                          std::vector<double> distance,
                                          std::vector<double> weights);

// {0,1}^n with Hamming distance and uniform weights.  Points are ordered by
// their integer encoding (coordinate i = bit i); labels are bit strings with
// coordinate 0 leftmost.  Dense materialization caps n at 12.
FiniteMetricProbabilitySpace build_hypercube(int n);
constexpr int kHypercubeMaxDim = 12;

// The (n+1)-point chain {(0,..,0), (1,0,..,0), ..., (1,..,1)} as a mask over
// build_hypercube(n)'s point order.
SubsetMask build_chain_subset(int n);

// n-fold product with the ell^1 metric d(x,y) = sum_i d(x_i, y_i) and
// product weights.  Point order is lexicographic with the last factor
// fastest; labels join factor labels with '|'.
FiniteMetricProbabilitySpace build_product(const FiniteMetricProbabilitySpace& base, int n);

struct RestrictedSpace {
    FiniteMetricProbabilitySpace space;
    double subset_mass;                  // mu(A), compensated summation
    std::vector<std::size_t> original_index;  // restricted point -> parent point
};

// Normalized restriction mu_A on the selected points with the induced metric.
// Fails with a zero-mass error when mu(A) = 0.
RestrictedSpace restrict_space(const FiniteMetricProbabilitySpace& space, const SubsetMask& mask);

// Shortest-path metric of the Hamming-adjacent subgraph induced on a subset
// of a hypercube.  Pairs in different components get +infinity and the
// component partition is reported.
struct InducedGraphMetric {
    std::size_t n_points;                 // restricted point count
    std::vector<double> distance;         // row-major, +inf across components
    std::vector<std::size_t> original_index;
    std::vector<int> component;           // component id per restricted point
    bool connected;
};
InducedGraphMetric induced_graph_metric(const FiniteMetricProbabilitySpace& hypercube,
                                        int n, const SubsetMask& mask);

// True iff the mask is an upper set under the coordinatewise order on {0,1}^n.
bool is_monotone(const SubsetMask& mask, int n);

// All upper sets of {0,1}^n including the empty and full set (168 at n = 4).
// Exhaustive scan; intended for n <= 4.
std::vector<SubsetMask> enumerate_monotone_masks(int n);

}  // namespace conc
