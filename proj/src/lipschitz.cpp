#include "conc/lipschitz.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "conc/orlicz.hpp"

namespace conc {

double lip_seminorm(const ScalarField& field, const FiniteMetricProbabilitySpace& space) {
    std::size_t k = space.size();
    if (field.size() != k) throw std::invalid_argument("lip_seminorm: field/space size mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double r = std::fabs(field[i] - field[j]) / space.d(i, j);
            if (r > best) best = r;
        }
    return best;
}

double lip_seminorm_on_subset(const ScalarField& field_on_subset,
                              const FiniteMetricProbabilitySpace& space,
                              const SubsetMask& mask) {
    auto idx = mask.indices();
    if (idx.empty()) throw std::invalid_argument("lip_seminorm_on_subset: empty mask");
    if (field_on_subset.size() != idx.size())
        throw std::invalid_argument("lip_seminorm_on_subset: field size differs from mask count");
    double best = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            double r = std::fabs(field_on_subset[a] - field_on_subset[b]) /
                       space.d(idx[a], idx[b]);
            if (r > best) best = r;
        }
    return best;
}

ScalarField kirszbraun_extend(const ScalarField& field_on_subset,
                              const FiniteMetricProbabilitySpace& space,
                              const SubsetMask& mask) {
    auto idx = mask.indices();
    if (idx.empty()) throw std::invalid_argument("kirszbraun_extend: empty mask");
    if (field_on_subset.size() != idx.size())
        throw std::invalid_argument("kirszbraun_extend: field size differs from mask count");
    std::size_t k = space.size();
    double lip = lip_seminorm_on_subset(field_on_subset, space, mask);

    ScalarField out(k, 0.0);
    if (lip == 0.0) {
        // any 0-Lipschitz extension is the constant; copy preserves bits
        for (std::size_t x = 0; x < k; ++x) out[x] = field_on_subset[0];
    } else {
        for (std::size_t x = 0; x < k; ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < idx.size(); ++a) {
                double cand = field_on_subset[a] / lip + space.d(idx[a], x);
                if (cand < best) best = cand;
            }
            out[x] = lip * best;
        }
    }
    // values on A are contractual copies, no arithmetic
    for (std::size_t a = 0; a < idx.size(); ++a) out[idx[a]] = field_on_subset[a];
    return out;
}

double symmetrized_psi_norm(const ScalarField& field, const FiniteMetricProbabilitySpace& space,
                            double alpha) {
    std::size_t k = space.size();
    if (field.size() != k)
        throw std::invalid_argument("symmetrized_psi_norm: field/space size mismatch");
    if (k * k > 4'000'000)
        throw std::invalid_argument("symmetrized_psi_norm: |M|^2 exceeds the 4e6 pair budget");
    auto fold = [&](const detail::AtomVisitor& visit) {
        for (std::size_t i = 0; i < k; ++i) {
            if (space.weights[i] <= 0.0) continue;
            for (std::size_t j = 0; j < k; ++j)
                visit(std::fabs(field[i] - field[j]), space.weights[i] * space.weights[j]);
        }
    };
    return detail::psi_norm_streaming(fold, alpha);
}

}  // namespace conc
