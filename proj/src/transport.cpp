#include "conc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>

#include "conc/numerics.hpp"
#include "conc/rng.hpp"

namespace conc {

namespace {

// ------------------------------------------------------------------
// Transportation simplex on the complete bipartite graph.
// Basis = spanning tree over row nodes [0,k) and column nodes [k,2k).
// Lowest-index entering and leaving rules (Bland) prevent cycling.
// ------------------------------------------------------------------
class TransportSimplex {
  public:
    TransportSimplex(std::span<const double> cost, std::size_t k) : c_(cost), k_(k) {}

    void solve(std::span<const double> a_in, std::span<const double> b_in) {
        a_.assign(a_in.begin(), a_in.end());
        b_.assign(b_in.begin(), b_in.end());
        // force exact balance; the residual is <= the caller's 1e-9 gate
        double imb = kahan_sum(a_) - kahan_sum(b_);
        b_[std::max_element(b_.begin(), b_.end()) - b_.begin()] += imb;

        northwest_corner();
        compute_potentials();

        double cost_scale = 1.0;
        for (double c : c_) cost_scale = std::max(cost_scale, std::fabs(c));
        const double tol = 1e-12 * cost_scale;

        std::size_t max_iter = 200 * k_ * k_ + 1000;
        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            std::size_t ei = k_, ej = k_;
            if (!find_entering(tol, ei, ej)) return;  // optimal
            pivot(ei, ej);
            compute_potentials();
        }
        throw std::runtime_error("w1: simplex iteration cap exceeded");
    }

    double primal_value() const {
        KahanSum acc;
        for (const Cell& cell : cells_)
            if (cell.alive) acc.add(cell.flow * c_[cell.i * k_ + cell.j]);
        return acc.value();
    }

    void fill_plan(std::vector<double>& plan) const {
        plan.assign(k_ * k_, 0.0);
        for (const Cell& cell : cells_)
            if (cell.alive) plan[cell.i * k_ + cell.j] += cell.flow;
    }

    const std::vector<double>& row_potentials() const { return u_; }

  private:
    struct Cell {
        std::size_t i, j;
        double flow;
        bool alive;
    };

    void northwest_corner() {
        cells_.clear();
        cells_.reserve(2 * k_ - 1);
        std::vector<double> ra = a_, cb = b_;
        std::size_t i = 0, j = 0;
        for (std::size_t step = 0; step + 1 < 2 * k_; ++step) {
            double t = std::min(ra[i], cb[j]);
            if (t < 0.0) t = 0.0;
            cells_.push_back({i, j, t, true});
            ra[i] -= t;
            cb[j] -= t;
            if (i == k_ - 1)
                ++j;
            else if (j == k_ - 1)
                ++i;
            else if (ra[i] <= cb[j])
                ++i;
            else
                ++j;
        }
        rebuild_adjacency();
    }

    void rebuild_adjacency() {
        adj_.assign(2 * k_, {});
        for (std::size_t id = 0; id < cells_.size(); ++id) {
            if (!cells_[id].alive) continue;
            adj_[cells_[id].i].push_back(id);
            adj_[k_ + cells_[id].j].push_back(id);
        }
    }

    void compute_potentials() {
        u_.assign(k_, 0.0);
        v_.assign(k_, 0.0);
        std::vector<std::uint8_t> seen(2 * k_, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            std::size_t node = stack.back();
            stack.pop_back();
            for (std::size_t id : adj_[node]) {
                const Cell& cell = cells_[id];
                std::size_t other = (node < k_) ? k_ + cell.j : cell.i;
                if (seen[other]) continue;
                seen[other] = 1;
                if (other >= k_)
                    v_[other - k_] = c_[cell.i * k_ + cell.j] - u_[cell.i];
                else
                    u_[other] = c_[cell.i * k_ + cell.j] - v_[cell.j];
                stack.push_back(other);
            }
        }
    }

    bool find_entering(double tol, std::size_t& ei, std::size_t& ej) const {
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j) {
                if (is_basic(i, j)) continue;
                if (c_[i * k_ + j] - u_[i] - v_[j] < -tol) {
                    ei = i;
                    ej = j;
                    return true;
                }
            }
        return false;
    }

    bool is_basic(std::size_t i, std::size_t j) const {
        for (std::size_t id : adj_[i])
            if (cells_[id].alive && cells_[id].j == j) return true;
        return false;
    }

    // Path from row node ei to column node k_+ej through the tree; the
    // entering cell closes the unique cycle.  Signs alternate -,+,-,...
    // along the path so both endpoints absorb the entering +theta.
    void pivot(std::size_t ei, std::size_t ej) {
        std::size_t n = 2 * k_;
        std::vector<std::size_t> parent_cell(n, SIZE_MAX), parent_node(n, SIZE_MAX);
        std::vector<std::uint8_t> seen(n, 0);
        std::vector<std::size_t> queue{ei};
        seen[ei] = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            std::size_t node = queue[qi];
            if (node == k_ + ej) break;
            for (std::size_t id : adj_[node]) {
                const Cell& cell = cells_[id];
                std::size_t other = (node < k_) ? k_ + cell.j : cell.i;
                if (seen[other]) continue;
                seen[other] = 1;
                parent_cell[other] = id;
                parent_node[other] = node;
                queue.push_back(other);
            }
        }
        std::size_t target = k_ + ej;
        if (!seen[target]) throw std::runtime_error("w1: basis lost connectivity");

        // walk back, collecting cells with alternating signs; the cell next
        // to the column endpoint carries -theta
        std::vector<std::size_t> path;
        for (std::size_t node = target; node != ei; node = parent_node[node])
            path.push_back(parent_cell[node]);
        // path[0] adjoins the entering column: signs -,+,- ... from there
        double theta = std::numeric_limits<double>::infinity();
        std::size_t leave_id = SIZE_MAX;
        std::size_t leave_key = SIZE_MAX;
        for (std::size_t t = 0; t < path.size(); t += 2) {
            const Cell& cell = cells_[path[t]];
            std::size_t key = cell.i * k_ + cell.j;
            if (cell.flow < theta || (cell.flow == theta && key < leave_key)) {
                theta = cell.flow;
                leave_id = path[t];
                leave_key = key;
            }
        }
        if (leave_id == SIZE_MAX) throw std::runtime_error("w1: unbounded pivot");

        for (std::size_t t = 0; t < path.size(); ++t) {
            Cell& cell = cells_[path[t]];
            cell.flow += (t % 2 == 0) ? -theta : theta;
            if (cell.flow < 0.0) cell.flow = 0.0;
        }
        cells_[leave_id].alive = false;
        cells_.push_back({ei, ej, theta, true});
        rebuild_adjacency();
    }

    std::span<const double> c_;
    std::size_t k_;
    std::vector<double> a_, b_;
    std::vector<Cell> cells_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<double> u_, v_;
};

void validate_marginal(const ProbabilityVector& nu, std::size_t k, const char* which) {
    if (nu.size() != k) throw std::invalid_argument(std::string("w1: ") + which + " size mismatch");
    double s = kahan_sum(nu.p);
    if (std::fabs(s - 1.0) > 1e-9)
        throw std::invalid_argument(std::string("w1: ") + which + " mass deviates by more than 1e-9");
    for (double x : nu.p)
        if (!(x >= 0.0)) throw std::invalid_argument(std::string("w1: ") + which + " has a negative entry");
}

}  // namespace

TransportPlan w1(const FiniteMetricProbabilitySpace& space, const ProbabilityVector& nu1,
                 const ProbabilityVector& nu2) {
    std::size_t k = space.size();
    validate_marginal(nu1, k, "nu1");
    validate_marginal(nu2, k, "nu2");

    TransportPlan out;
    if (k == 1) {
        out.plan = {1.0};
        out.potential = {0.0};
        return out;
    }

    TransportSimplex simplex(space.distance, k);
    simplex.solve(nu1.p, nu2.p);
    simplex.fill_plan(out.plan);
    out.value = simplex.primal_value();

    // Kantorovich potential by double c-transform of the simplex duals:
    // phi_j = min_i (C_ij - u_i) is 1-Lipschitz, and -phi pairs with it.
    const std::vector<double>& u = simplex.row_potentials();
    std::vector<double> phi(k);
    for (std::size_t j = 0; j < k; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) best = std::min(best, space.d(i, j) - u[i]);
        phi[j] = best;
    }
    out.potential.resize(k);
    for (std::size_t i = 0; i < k; ++i) out.potential[i] = -phi[i];

    KahanSum dual;
    for (std::size_t i = 0; i < k; ++i) dual.add(out.potential[i] * (nu1.p[i] - nu2.p[i]));
    out.gap = std::fabs(out.value - dual.value());
    return out;
}

KlResult kl_divergence(const ProbabilityVector& nu, std::span<const double> mu) {
    if (nu.size() != mu.size()) throw std::invalid_argument("kl_divergence: size mismatch");
    KlResult out;
    KahanSum acc;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        double n = nu.p[i];
        if (n <= 0.0) continue;
        if (mu[i] <= 0.0) {
            out.absolutely_continuous = false;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        acc.add(n * std::log(n / mu[i]));
    }
    out.value = std::max(0.0, acc.value());
    return out;
}

namespace {

struct RatioEval {
    double ratio;
    bool usable;
};

RatioEval transport_ratio(const FiniteMetricProbabilitySpace& space, const ProbabilityVector& mu,
                          const ProbabilityVector& nu) {
    KlResult kl = kl_divergence(nu, space.weights);
    if (!kl.absolutely_continuous || kl.value < 1e-12) return {0.0, false};
    double w = w1(space, mu, nu).value;
    return {w * w / (2.0 * kl.value), true};
}

}  // namespace

BoundEstimate sigma_transport(const FiniteMetricProbabilitySpace& space,
                              const EstimateOptions& options) {
    std::size_t k = space.size();
    BoundEstimate out;
    out.witness_kind = "measure";
    if (k == 1) {
        out.witness = {1.0};
        out.method = "singleton";
        return out;
    }
    ProbabilityVector mu{space.weights};
    double best = 0.0;
    std::vector<double> best_nu = space.weights;
    std::string method = "mirror-ascent";

    auto consider = [&](const ProbabilityVector& nu, const char* tag) {
        RatioEval e = transport_ratio(space, mu, nu);
        if (e.usable && e.ratio > best) {
            best = e.ratio;
            best_nu = nu.p;
            method = tag;
        }
        return e;
    };

    // point masses
    for (std::size_t x = 0; x < k; ++x) {
        if (space.weights[x] <= 0.0) continue;
        ProbabilityVector nu{std::vector<double>(k, 0.0)};
        nu.p[x] = 1.0;
        consider(nu, "point-mass");
    }

    // two-point mixtures
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (k <= 16) {
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t y = x + 1; y < k; ++y) pairs.emplace_back(x, y);
    } else {
        SplitMix64 rng(derive_stream(options.seed, 77));
        for (int t = 0; t < 120; ++t) {
            std::size_t x = rng.next_index(k), y = rng.next_index(k);
            if (x != y) pairs.emplace_back(x, y);
        }
    }
    for (auto [x, y] : pairs) {
        for (double q = 0.02; q < 0.999; q += 0.04) {
            ProbabilityVector nu{std::vector<double>(k, 0.0)};
            nu.p[x] = q;
            nu.p[y] = 1.0 - q;
            consider(nu, "two-point-mixture");
        }
    }

    // mu-perturbation seeds along top-variance distance columns; the ratio
    // tends to Var of the direction as nu -> mu
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t x0 = 0; x0 < k; ++x0) {
        std::vector<double> col(k);
        for (std::size_t x = 0; x < k; ++x) col[x] = space.d(x0, x);
        ranked.emplace_back(variance(col, space.weights), x0);
    }
    std::sort(ranked.rbegin(), ranked.rend());
    std::vector<ProbabilityVector> seeds;
    for (std::size_t r = 0; r < std::min<std::size_t>(3, ranked.size()); ++r) {
        std::vector<double> g(k);
        for (std::size_t x = 0; x < k; ++x) g[x] = space.d(ranked[r].second, x);
        double m = weighted_mean(g, space.weights);
        double sup = 1e-300;
        for (std::size_t x = 0; x < k; ++x) {
            g[x] -= m;
            sup = std::max(sup, std::fabs(g[x]));
        }
        for (double eps : {1e-2, 1e-3}) {
            for (double sign : {1.0, -1.0}) {
                std::vector<double> nu(k);
                for (std::size_t x = 0; x < k; ++x)
                    nu[x] = space.weights[x] * (1.0 + sign * eps * g[x] / sup);
                double s = kahan_sum(nu);
                for (double& x : nu) x /= s;
                ProbabilityVector pv{nu};
                consider(pv, "mu-perturbation");
                seeds.push_back(std::move(pv));
            }
        }
    }

    // exponentiated-gradient (mirror) ascent with backtracking line search
    int restarts = std::max(1, options.restarts / 4);
    for (int r = -static_cast<int>(seeds.size()); r < restarts; ++r) {
        ProbabilityVector nu{std::vector<double>(k)};
        if (r < 0) {
            nu = seeds[static_cast<std::size_t>(-r - 1)];
        } else {
            SplitMix64 rng(derive_stream(options.seed, 1000 + static_cast<std::uint64_t>(r)));
            double s = 0.0;
            for (std::size_t x = 0; x < k; ++x) {
                nu.p[x] = rng.next_exponential();
                s += nu.p[x];
            }
            for (double& x : nu.p) x /= s;
        }
        RatioEval cur = transport_ratio(space, mu, nu);
        if (!cur.usable) continue;
        double eta = 0.25;
        for (int it = 0; it < 150; ++it) {
            TransportPlan plan = w1(space, mu, nu);
            KlResult kl = kl_divergence(nu, space.weights);
            if (!kl.absolutely_continuous || kl.value < 1e-12) break;
            double wv = plan.value;
            double dv = kl.value;
            std::vector<double> grad(k);
            double gmax = 0.0;
            for (std::size_t x = 0; x < k; ++x) {
                double dkl = (nu.p[x] > 0.0 && space.weights[x] > 0.0)
                                 ? std::log(nu.p[x] / space.weights[x]) + 1.0
                                 : 0.0;
                grad[x] = (wv / dv) * (-plan.potential[x]) - (wv * wv / (2.0 * dv * dv)) * dkl;
                gmax = std::max(gmax, std::fabs(grad[x]));
            }
            if (gmax == 0.0) break;
            bool accepted = false;
            for (int bt = 0; bt < 25; ++bt) {
                ProbabilityVector trial{std::vector<double>(k)};
                double s = 0.0;
                for (std::size_t x = 0; x < k; ++x) {
                    trial.p[x] = nu.p[x] * std::exp(eta * grad[x] / gmax);
                    s += trial.p[x];
                }
                for (double& x : trial.p) x /= s;
                RatioEval e = transport_ratio(space, mu, trial);
                if (e.usable && e.ratio > cur.ratio) {
                    nu = std::move(trial);
                    double gain = e.ratio - cur.ratio;
                    cur = e;
                    accepted = true;
                    eta *= 1.3;
                    if (gain < 1e-12 * (1.0 + cur.ratio)) it = 150;
                    break;
                }
                eta *= 0.5;
            }
            if (!accepted) break;
        }
        if (cur.ratio > best) {
            best = cur.ratio;
            best_nu = nu.p;
            method = "mirror-ascent";
        }
    }

    // exhaustive simplex grid on tiny spaces
    if (k <= 4 && options.run_grid_oracle) {
        constexpr int steps = 200;  // grid step 0.005
        std::vector<double> logi(steps + 1, 0.0);
        for (int i = 1; i <= steps; ++i) logi[static_cast<std::size_t>(i)] = std::log(i / 200.0);
        std::vector<double> logmu(k);
        for (std::size_t x = 0; x < k; ++x)
            logmu[x] = space.weights[x] > 0.0 ? std::log(space.weights[x]) : 0.0;

        std::vector<int> comp(k, 0);
        ProbabilityVector nu{std::vector<double>(k)};
        std::function<void(std::size_t, int)> recurse = [&](std::size_t pos, int left) {
            if (pos + 1 == k) {
                comp[pos] = left;
                double kl = 0.0;
                bool ok = true;
                for (std::size_t x = 0; x < k; ++x) {
                    nu.p[x] = comp[x] / 200.0;
                    if (comp[x] == 0) continue;
                    if (space.weights[x] <= 0.0) {
                        ok = false;
                        break;
                    }
                    kl += nu.p[x] * (logi[static_cast<std::size_t>(comp[x])] - logmu[x]);
                }
                if (ok && kl > 1e-12) {
                    double wv = w1(space, mu, nu).value;
                    double ratio = wv * wv / (2.0 * kl);
                    if (ratio > best) {
                        best = ratio;
                        best_nu = nu.p;
                        method = "grid-oracle";
                    }
                }
                return;
            }
            for (int c = 0; c <= left; ++c) {
                comp[pos] = c;
                recurse(pos + 1, left - c);
            }
        };
        recurse(0, steps);
    }

    out.lower = best;
    out.witness = best_nu;
    out.method = method;
    double diam = space.diameter();
    out.upper = std::max(diam * diam / 4.0, out.lower);
    return out;
}

CheckReport check_cor44(const FiniteMetricProbabilitySpace& space, const SubsetMask& mask,
                        const ProbabilityVector& nu, double c,
                        std::optional<double> sigma_sq_ambient) {
    std::size_t k = space.size();
    if (nu.size() != k) throw std::invalid_argument("check_cor44: nu size mismatch");
    for (std::size_t i = 0; i < k; ++i)
        if (nu.p[i] > 0.0 && !mask.contains(i))
            throw std::invalid_argument("check_cor44: nu charges a point outside A");

    double sigma_amb;
    if (sigma_sq_ambient)
        sigma_amb = *sigma_sq_ambient;
    else if (space.known_sigma_sq)
        sigma_amb = *space.known_sigma_sq;
    else
        throw std::invalid_argument("check_cor44: needs a trusted sigma^2(mu)");

    RestrictedSpace r = restrict_space(space, mask);
    ProbabilityVector nu_a{std::vector<double>(r.space.size())};
    for (std::size_t a = 0; a < r.original_index.size(); ++a)
        nu_a.p[a] = nu.p[r.original_index[a]];

    KlResult d_full = kl_divergence(nu, space.weights);
    KlResult d_rest = kl_divergence(nu_a, r.space.weights);
    double identity_gap =
        std::fabs(d_rest.value - (std::log(r.subset_mass) + d_full.value));
    if (identity_gap > 1e-12)
        throw std::runtime_error("check_cor44: entropy restriction identity violated: gap = " +
                                 std::to_string(identity_gap));

    double wv = w1(r.space, ProbabilityVector{r.space.weights}, nu_a).value;
    double lhs = wv * wv;
    double rhs = c * sigma_amb * std::log(std::exp(1.0) / r.subset_mass) * d_rest.value;
    CheckReport rep = make_check(
        "cor-4.4-transport-entropy", lhs, rhs, c, 0.0,
        "D(nu||mu_A) = " + std::to_string(d_rest.value) +
            ", identity gap = " + std::to_string(identity_gap) +
            ", mu(A) = " + std::to_string(r.subset_mass));
    if (d_rest.value == 0.0 && lhs <= 1e-24) rep.passed = true;  // 0 <= 0 case, FP-safe
    return rep;
}

}  // namespace conc
