#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "conc/report.hpp"
#include "conc/space.hpp"

namespace conc {

// Explicit proof constant of the restriction theorem: 4*(4e*sqrt2)^2*(4*sqrt6)^2.
inline constexpr double RESTRICTION_SUBGAUSSIAN_CONSTANT = 12288.0 * 2.718281828459045 *
                                                           2.718281828459045;  // 3*2^12*e^2

double weighted_mean(std::span<const double> field, std::span<const double> weights);

// integral (f - m)^2 dmu, two-pass compensated.
double variance(std::span<const double> field, std::span<const double> weights);

// sigma_f^2 = sup_{t != 0} (2/t^2) log integral e^{t(f-m)} dmu.  Centers
// internally.  The t -> 0 limit equals Var(f) and is substituted
// analytically; the interior search runs on both signs of t with the upper
// end extended until the ratio decays over three successive octaves.
double sigma_f_sq(std::span<const double> field, std::span<const double> weights);

struct EstimateOptions {
    int restarts = 64;
    std::uint64_t seed = 1234;
    int max_climb_rounds = 60;       // coordinate-ascent sweeps per restart
    bool run_grid_oracle = true;     // transport route only, spaces <= 4 points
};

// Spread constant s^2(mu): lower bound from distance-column candidates plus
// multi-start McShane-regularized coordinate ascent; upper bound diam^2/4
// (or 1/lambda1 when the caller knows one, passed as inv_lambda1).
BoundEstimate spread_estimate(const FiniteMetricProbabilitySpace& space,
                              const EstimateOptions& options = {},
                              std::optional<double> inv_lambda1 = std::nullopt);

// Subgaussian constant sigma^2(mu) via the Lipschitz route: same candidate
// family scored by sigma_f^2.  Upper bound diam^2/4 ("hoeffding-diam").
// Diagnostics carry the psi_2 sandwich numbers of the winning witness.
BoundEstimate sigma_estimate_lipschitz(const FiniteMetricProbabilitySpace& space,
                                       const EstimateOptions& options = {});

// Non-violation check of the restriction inequality
// sigma^2(mu_A) <= c log(e/mu(A)) sigma^2(mu).  The left side is our lower
// estimate; the right side uses a trusted exact value or upper bound for
// sigma^2(mu) (hypercubes supply n/4 automatically).
CheckReport check_restriction_subgaussian(const FiniteMetricProbabilitySpace& space,
                                          const SubsetMask& mask, double c,
                                          std::optional<double> sigma_sq_ambient = std::nullopt,
                                          const EstimateOptions& options = {});

}  // namespace conc
