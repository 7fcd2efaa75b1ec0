#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "conc/report.hpp"
#include "conc/space.hpp"

namespace conc {

enum class DensityFamily {
    Gaussian1d,             // standard normal on R
    TwoSidedExponential,    // density e^{-|x|}/2 on R
    ExponentialRadial2d,    // (x1^2+x2^2)/2 ~ Exp(1): the Gaussian-shell radial law
    UniformCubeProduct,     // product of uniforms on [-1,1]
};

struct DensitySpec {
    DensityFamily family = DensityFamily::Gaussian1d;
    int dimension = 1;  // used by the product families
};

// Moments of the density restricted to the canonical R-threshold set of the
// family ({|x| >= R} in 1-d, {x1^2 + x2^2 >= R^2} for the radial law).
struct RestrictedMoments {
    double mass = 0.0;
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
};
RestrictedMoments quad_restricted_moments(const DensitySpec& spec, double threshold);

// Adaptive Gauss-Kronrod (G7, K15) integration to absolute tolerance;
// throws when the subdivision budget is exhausted before convergence.
double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int max_intervals = 4000);

enum class CloudMetric { Euclidean, Ell1 };

// Monte Carlo sample of a density: N iid points with uniform weights.
// Deterministic per (seed, point index) sub-streams, so the draw does not
// depend on how the work is batched.  The dense space materialization is
// separate and capped (memory), while sampling itself allows large N.
struct SampleCloud {
    std::vector<double> points;  // row-major N x dim
    int dim = 1;
    std::size_t n = 0;
    CloudMetric metric = CloudMetric::Euclidean;

    double coord(std::size_t i, int d) const { return points[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)]; }
    double dist(std::size_t i, std::size_t j) const;
    FiniteMetricProbabilitySpace to_space() const;  // N <= 4096
};
constexpr std::size_t kDenseMetricCap = 4096;
constexpr std::size_t kSampleCap = 1'000'000;

SampleCloud sample_space(const DensitySpec& spec, int dimension, std::size_t n,
                         std::uint64_t seed, CloudMetric metric = CloudMetric::Euclidean);

// A = {points with |grad f| <= L}.
SubsetMask gradient_level_mask(std::span<const double> gradfield, double level);

// Empirical check of the two-sided deviation inequality
//   (mu x mu){|f(x)-f(y)| >= t} <= 2 inf_{L >= L0} [e^{-t^2/(c sigma^2 L^2)}
//                                                   + mu{|grad f| > L}]
// on a sample with uniform weights.  The empirical side is relaxed by a
// 3.9-sigma binomial half-width so true inequalities cannot fail by Monte
// Carlo noise.  Throws when mu{|grad f| >= L0} > 1/2 (theorem hypothesis).
std::vector<CheckReport> check_two_sided_deviation(std::span<const double> field_values,
                                                   std::span<const double> gradfield, double l0,
                                                   double c, double sigma_sq,
                                                   std::span<const double> t_grid);

// Convex function accessed through value/subgradient callbacks.
struct ConvexOracle {
    std::function<double(std::span<const double>)> value;
    std::function<std::vector<double>(std::span<const double>)> subgradient;
};

// Max-of-tangents clipping: g(x) = max over anchors a (eval points with
// |subgradient| <= L) of f(a) + <v_a, x - a>.  Guarantees g <= f on eval
// points, g = f at anchors, and Lip(g) <= L.  Oracle consistency (the
// subgradient inequality) is spot-checked on sampled pairs.
std::vector<double> convex_clip_extension(const ConvexOracle& oracle,
                                          std::span<const double> eval_points, int dim,
                                          double lip_budget);

}  // namespace conc
