#pragma once

#include <optional>

#include "conc/constants.hpp"
#include "conc/report.hpp"
#include "conc/space.hpp"

namespace conc {

// Optimal coupling with a duality certificate.  The potential is
// 1-Lipschitz on the space and value = sum_i potential_i (nu1_i - nu2_i)
// up to the certified gap.
struct TransportPlan {
    std::vector<double> plan;       // row-major k x k, rows follow nu1
    double value = 0.0;
    std::vector<double> potential;  // Kantorovich dual witness
    double gap = 0.0;
};

// W_1(nu1, nu2) on the space's metric by an exact transportation simplex
// (lowest-index anti-cycling pivots).  Throws when a marginal deviates from
// unit mass by more than 1e-9.
TransportPlan w1(const FiniteMetricProbabilitySpace& space, const ProbabilityVector& nu1,
                 const ProbabilityVector& nu2);

struct KlResult {
    double value = 0.0;
    bool absolutely_continuous = true;  // false: nu charges a mu-null point
};

// D(nu || mu) = sum nu log(nu/mu) with 0 log 0 = 0.
KlResult kl_divergence(const ProbabilityVector& nu, std::span<const double> mu);

// Transport-entropy route to sigma^2: sup_nu W_1(mu, nu)^2 / (2 D(nu||mu)).
// Lower bound from point masses, two-point mixtures, mu-perturbation seeds
// along top-variance directions, and multi-start mirror ascent; spaces with
// <= 4 points additionally run the simplex grid oracle (step 0.005) when
// options.run_grid_oracle is set.  Upper bound diam^2/4.
BoundEstimate sigma_transport(const FiniteMetricProbabilitySpace& space,
                              const EstimateOptions& options = {});

// Corollary of the restriction theorem in transport form:
// W_1^2(mu_A, nu) <= c sigma^2(mu) log(e/mu(A)) D(nu||mu_A) for nu supported
// on A.  Also verifies the identity D(nu||mu_A) = log mu(A) + D(nu||mu) to
// 1e-12 and reports it in the witness text.
CheckReport check_cor44(const FiniteMetricProbabilitySpace& space, const SubsetMask& mask,
                        const ProbabilityVector& nu, double c,
                        std::optional<double> sigma_sq_ambient = std::nullopt);

}  // namespace conc
