#pragma once

#include "conc/constants.hpp"
#include "conc/report.hpp"
#include "conc/space.hpp"

namespace conc {

// Explicit proof constant of the Poincare-route restriction bound: 2*(36e)^2.
inline constexpr double POINCARE_RESTRICTION_CONSTANT =
    2.0 * (36.0 * 2.718281828459045) * (36.0 * 2.718281828459045);

// Dirichlet form on a finite space: symmetric nonnegative edge rates w(x,y)
// over the reference weights mu.  The energy counts each unordered edge once,
//   E(f,f) = (1/2) sum_x mu(x) sum_{y~x} w(x,y) (f(y) - f(x))^2,
// and the matching gradient is |grad f|(x)^2 = (1/2) sum_y w(x,y)(f(y)-f(x))^2,
// so E(f,f) = integral |grad f|^2 dmu holds by construction.
struct DirichletForm {
    std::vector<double> rates;  // row-major k x k, symmetric, zero diagonal
    std::vector<double> mu;
    bool connected = true;      // of the positive-rate graph

    std::size_t size() const { return mu.size(); }
    double w(std::size_t i, std::size_t j) const { return rates[i * size() + j]; }
};

enum class AdjacencyRule { UnitDistanceEdges, ExplicitMatrix };

// Unit rate on every unit-distance pair (the hypercube coordinate-flip form),
// or a caller-supplied rate matrix.
DirichletForm build_graph_form(const FiniteMetricProbabilitySpace& space, AdjacencyRule rule,
                               const std::vector<double>* explicit_rates = nullptr);

double dirichlet_energy(const DirichletForm& form, const ScalarField& f);

// |grad f| per point in the form's gradient convention.
std::vector<double> form_gradient(const DirichletForm& form, const ScalarField& f);

struct Lambda1Result {
    double lambda1 = 0.0;
    std::vector<double> eigenvector;  // attains E(v,v)/Var(v) = lambda1
    bool connected = true;
};

// Smallest nonzero eigenvalue of the mu-weighted generator, i.e. the best
// constant in lambda1 Var(f) <= E(f,f).  Dense Jacobi eigensolve with the
// constant eigenvector deflated exactly; k <= 512.
Lambda1Result lambda1(const DirichletForm& form);

// Non-violation check of s^2(mu_A) <= c log^2(e/mu(A)) / lambda1 with the
// restricted spread measured over fields rescaled to form-gradient sup <= 1
// inside A.  lambda1 = 0 yields a vacuous (flagged, not passed) report.
// The Lemma 5.1 psi_1 diagnostic is reported in the witness text, never
// asserted.
CheckReport check_poincare_spread(const DirichletForm& form,
                                  const FiniteMetricProbabilitySpace& space,
                                  const SubsetMask& mask, double c,
                                  const EstimateOptions& options = {});

}  // namespace conc
