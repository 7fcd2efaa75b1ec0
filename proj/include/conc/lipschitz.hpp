#pragma once

#include "conc/space.hpp"

namespace conc {

// max over pairs of |f(x) - f(y)| / d(x, y); 0 for singletons.
double lip_seminorm(const ScalarField& field, const FiniteMetricProbabilitySpace& space);

// Lipschitz seminorm of a field given on the masked points only, measured in
// the induced metric.  `field_on_subset` is ordered by ascending original
// point index.
double lip_seminorm_on_subset(const ScalarField& field_on_subset,
                              const FiniteMetricProbabilitySpace& space,
                              const SubsetMask& mask);

// McShane/Kirszbraun extension: with L the seminorm of f on A, extends f/L
// by min_a [f(a)/L + d(a, x)] and scales back.  Values on A are copied
// bitwise; the extension has seminorm L.
ScalarField kirszbraun_extend(const ScalarField& field_on_subset,
                              const FiniteMetricProbabilitySpace& space,
                              const SubsetMask& mask);

// psi_alpha-norm of (x, y) -> f(x) - f(y) under mu (x) mu.  Streams over the
// k^2 pairs; no product-space materialization.
double symmetrized_psi_norm(const ScalarField& field, const FiniteMetricProbabilitySpace& space,
                            double alpha);

}  // namespace conc
