#pragma once

#include <functional>
#include <span>

#include "conc/space.hpp"

namespace conc {

// Right-hand factors of the moment/Orlicz sandwiches.  Part of the
// acceptance surface; never inline the literals.
inline constexpr double PSI2_MOMENT_FACTOR = 4.0;
inline constexpr double PSI1_MOMENT_FACTOR = 6.0;

// (integral |f|^p dmu)^{1/p}, max-factored so large p cannot overflow.
double lp_norm(std::span<const double> field, std::span<const double> weights, double p);

// sup_{p >= 1} ||f||_p / p^{1/alpha}, located by a coarse log-spaced scan on
// [1, 50(1 + log k)] and golden-section refinement to relative tolerance 1e-8.
double moment_sup(std::span<const double> field, std::span<const double> weights, double alpha);

// Orlicz norm for psi_alpha(t) = e^{|t|^alpha} - 1: the least r with
// integral exp((|f|/r)^alpha) dmu <= 2.  Bisection over a guaranteed
// bracket; the returned r has |integral - 2| <= 1e-10.  Zero field -> 0.
double psi_norm(std::span<const double> field, std::span<const double> weights, double alpha);

namespace detail {

// Shared bisection core.  `fold` must call visit(|value|, weight) for every
// atom of the measure; both the bracket construction and each integral
// evaluation stream through it.
using AtomVisitor = std::function<void(double, double)>;
using AtomFold = std::function<void(const AtomVisitor&)>;
double psi_norm_streaming(const AtomFold& fold, double alpha);

}  // namespace detail

}  // namespace conc
