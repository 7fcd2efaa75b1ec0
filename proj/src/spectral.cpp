#include "conc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "conc/numerics.hpp"
#include "conc/orlicz.hpp"

namespace conc {

namespace {

bool positive_rate_connected(const DirichletForm& form) {
    std::size_t k = form.size();
    std::vector<std::uint8_t> seen(k, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t y = 0; y < k; ++y) {
            if (!seen[y] && form.w(x, y) > 0.0) {
                seen[y] = 1;
                ++count;
                stack.push_back(y);
            }
        }
    }
    return count == k;
}

// Cyclic Jacobi on a symmetric matrix; returns eigenvalues on the diagonal
// and accumulates rotations into V (eigenvectors as columns).
void jacobi_eigen(std::vector<double>& a, std::size_t k, std::vector<double>& v) {
    v.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) v[i * k + i] = 1.0;
    double fro = 0.0;
    for (double x : a) fro += x * x;
    double tol2 = 1e-24 * (1.0 + fro);

    for (int sweep = 0; sweep < 80; ++sweep) {
        double off2 = 0.0;
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q) off2 += 2.0 * a[p * k + q] * a[p * k + q];
        if (off2 < tol2) return;

        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q) {
                double apq = a[p * k + q];
                if (apq == 0.0) continue;
                double app = a[p * k + p], aqq = a[q * k + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;

                for (std::size_t i = 0; i < k; ++i) {
                    double aip = a[i * k + p], aiq = a[i * k + q];
                    a[i * k + p] = c * aip - s * aiq;
                    a[i * k + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    double api = a[p * k + i], aqi = a[q * k + i];
                    a[p * k + i] = c * api - s * aqi;
                    a[q * k + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    double vip = v[i * k + p], viq = v[i * k + q];
                    v[i * k + p] = c * vip - s * viq;
                    v[i * k + q] = s * vip + c * viq;
                }
            }
    }
}

}  // namespace

DirichletForm build_graph_form(const FiniteMetricProbabilitySpace& space, AdjacencyRule rule,
                               const std::vector<double>* explicit_rates) {
    std::size_t k = space.size();
    DirichletForm form;
    form.mu = space.weights;
    if (rule == AdjacencyRule::ExplicitMatrix) {
        if (!explicit_rates || explicit_rates->size() != k * k)
            throw std::invalid_argument("build_graph_form: explicit rate matrix required (k x k)");
        form.rates = *explicit_rates;
        for (std::size_t i = 0; i < k; ++i) {
            if (form.rates[i * k + i] != 0.0)
                throw std::invalid_argument("build_graph_form: nonzero diagonal rate");
            for (std::size_t j = i + 1; j < k; ++j) {
                if (form.rates[i * k + j] != form.rates[j * k + i])
                    throw std::invalid_argument("build_graph_form: rate matrix not symmetric");
                if (form.rates[i * k + j] < 0.0)
                    throw std::invalid_argument("build_graph_form: negative rate");
            }
        }
    } else {
        form.rates.assign(k * k, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i != j && std::fabs(space.d(i, j) - 1.0) <= 1e-12) form.rates[i * k + j] = 1.0;
    }
    form.connected = positive_rate_connected(form);
    return form;
}

double dirichlet_energy(const DirichletForm& form, const ScalarField& f) {
    std::size_t k = form.size();
    if (f.size() != k) throw std::invalid_argument("dirichlet_energy: field size mismatch");
    KahanSum acc;
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = x + 1; y < k; ++y) {
            double w = form.w(x, y);
            if (w <= 0.0) continue;
            double d = f[y] - f[x];
            acc.add((form.mu[x] + form.mu[y]) * 0.5 * w * d * d);
        }
    return acc.value();
}

std::vector<double> form_gradient(const DirichletForm& form, const ScalarField& f) {
    std::size_t k = form.size();
    if (f.size() != k) throw std::invalid_argument("form_gradient: field size mismatch");
    std::vector<double> g(k, 0.0);
    for (std::size_t x = 0; x < k; ++x) {
        double acc = 0.0;
        for (std::size_t y = 0; y < k; ++y) {
            double w = form.w(x, y);
            if (w <= 0.0) continue;
            double d = f[y] - f[x];
            acc += 0.5 * w * d * d;
        }
        g[x] = std::sqrt(acc);
    }
    return g;
}

Lambda1Result lambda1(const DirichletForm& form) {
    std::size_t k = form.size();
    if (k < 2) throw std::invalid_argument("lambda1: needs at least two points");
    if (k > 512) throw std::invalid_argument("lambda1: k > 512 is out of desk scale");
    for (double m : form.mu)
        if (!(m > 0.0))
            throw std::invalid_argument("lambda1: reference weights must be strictly positive");

    // conductances c_xy = (mu_x + mu_y)/2 * w_xy give E(f,f) = f^T K f
    std::vector<double> kmat(k * k, 0.0);
    for (std::size_t x = 0; x < k; ++x) {
        double row = 0.0;
        for (std::size_t y = 0; y < k; ++y) {
            if (y == x) continue;
            double c = (form.mu[x] + form.mu[y]) * 0.5 * form.w(x, y);
            kmat[x * k + y] = -c;
            row += c;
        }
        kmat[x * k + x] = row;
    }

    // symmetrize in L^2(mu): S = M^{-1/2} K M^{-1/2}
    std::vector<double> s(k * k);
    std::vector<double> inv_sqrt(k);
    for (std::size_t x = 0; x < k; ++x) inv_sqrt[x] = 1.0 / std::sqrt(form.mu[x]);
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y) s[x * k + y] = inv_sqrt[x] * kmat[x * k + y] * inv_sqrt[y];

    // deflate the constant direction q = sqrt(mu) exactly: S <- P S P
    std::vector<double> q(k);
    double qn = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
        q[x] = std::sqrt(form.mu[x]);
        qn += q[x] * q[x];
    }
    qn = std::sqrt(qn);
    for (double& x : q) x /= qn;
    auto project = [&](std::vector<double>& m) {
        // m <- (I - qq^T) m (I - qq^T)
        std::vector<double> tmp(k);
        for (std::size_t col = 0; col < k; ++col) {
            double dot = 0.0;
            for (std::size_t row = 0; row < k; ++row) dot += q[row] * m[row * k + col];
            for (std::size_t row = 0; row < k; ++row) m[row * k + col] -= q[row] * dot;
        }
        for (std::size_t row = 0; row < k; ++row) {
            double dot = 0.0;
            for (std::size_t col = 0; col < k; ++col) dot += m[row * k + col] * q[col];
            for (std::size_t col = 0; col < k; ++col) m[row * k + col] -= dot * q[col];
        }
        (void)tmp;
    };
    project(s);

    std::vector<double> vecs;
    jacobi_eigen(s, k, vecs);

    // drop the eigenpair living on the deflated constant direction
    std::size_t skip = 0;
    double best_overlap = -1.0;
    for (std::size_t e = 0; e < k; ++e) {
        double ov = 0.0;
        for (std::size_t x = 0; x < k; ++x) ov += vecs[x * k + e] * q[x];
        if (std::fabs(ov) > best_overlap) {
            best_overlap = std::fabs(ov);
            skip = e;
        }
    }
    double lam = std::numeric_limits<double>::infinity();
    std::size_t arg = skip;
    for (std::size_t e = 0; e < k; ++e) {
        if (e == skip) continue;
        double val = s[e * k + e];
        if (val < lam) {
            lam = val;
            arg = e;
        }
    }
    if (lam < 0.0 && lam > -1e-9) lam = 0.0;

    Lambda1Result out;
    out.lambda1 = lam;
    out.connected = form.connected;
    out.eigenvector.resize(k);
    for (std::size_t x = 0; x < k; ++x) out.eigenvector[x] = vecs[x * k + arg] * inv_sqrt[x];
    return out;
}

CheckReport check_poincare_spread(const DirichletForm& form,
                                  const FiniteMetricProbabilitySpace& space,
                                  const SubsetMask& mask, double c,
                                  const EstimateOptions& options) {
    if (form.size() != space.size())
        throw std::invalid_argument("check_poincare_spread: form/space size mismatch");
    Lambda1Result lam = lambda1(form);
    if (lam.lambda1 <= 1e-14) {
        CheckReport rep;
        rep.name = "thm-1.3-poincare-restriction";
        rep.constant_used = c;
        rep.vacuous = true;
        rep.witness = "lambda1 = 0 (disconnected form); check is vacuous";
        return rep;
    }

    RestrictedSpace r = restrict_space(space, mask);
    const auto& idx = r.original_index;
    std::size_t m = idx.size();

    // form-gradient sup of a restricted field, edges inside A only
    auto grad_sup_in_a = [&](const ScalarField& f) {
        double sup = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            double acc = 0.0;
            for (std::size_t b = 0; b < m; ++b) {
                double w = form.w(idx[a], idx[b]);
                if (w <= 0.0) continue;
                double d = f[b] - f[a];
                acc += 0.5 * w * d * d;
            }
            sup = std::max(sup, std::sqrt(acc));
        }
        return sup;
    };

    double lhs = 0.0;
    auto consider = [&](const ScalarField& f) {
        double g = grad_sup_in_a(f);
        if (g <= 0.0) return;
        lhs = std::max(lhs, variance(f, r.space.weights) / (g * g));
    };
    if (m > 1) {
        BoundEstimate sp = spread_estimate(r.space, options);
        consider(sp.witness);
        ScalarField col(m);
        for (std::size_t x0 = 0; x0 < m; ++x0) {
            for (std::size_t x = 0; x < m; ++x) col[x] = r.space.d(x0, x);
            consider(col);
        }
    }

    double loge = std::log(std::exp(1.0) / r.subset_mass);
    double rhs = c * loge * loge / lam.lambda1;

    // Lemma 5.1 diagnostic on the full space (reported only)
    std::string diag = "lemma-5.1: not evaluated";
    {
        ScalarField col(space.size());
        for (std::size_t x = 0; x < space.size(); ++x) col[x] = space.d(0, x);
        std::vector<double> g = form_gradient(form, col);
        double gs = 0.0;
        for (double x : g) gs = std::max(gs, x);
        if (gs > 0.0) {
            for (double& x : col) x /= gs;
            double mmean = weighted_mean(col, space.weights);
            for (double& x : col) x -= mmean;
            double p1 = psi_norm(col, space.weights, 1.0);
            diag = "lemma-5.1 diagnostic (reported): ||f-m||_psi1 = " + std::to_string(p1) +
                   " vs 2/sqrt(lambda1) = " + std::to_string(2.0 / std::sqrt(lam.lambda1));
        }
    }

    CheckReport rep = make_check("thm-1.3-poincare-restriction", lhs, rhs, c, 0.0,
                                 "mu(A) = " + std::to_string(r.subset_mass) +
                                     ", lambda1 = " + std::to_string(lam.lambda1) + "; " + diag);
    return rep;
}

}  // namespace conc
