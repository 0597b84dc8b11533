#include "kinhj/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kinhj/ap_scheme.hpp"

namespace kinhj {

double jump_cost(double w, double v, double dt) {
    if (v == w) return v != 0.0 ? dt : 0.0;
    return 0.5 * v * v;
}

double discrete_action(std::span<const double> w, double dt) {
    if (w.size() < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) acc += jump_cost(w[k], w[k + 1], dt);
    return acc;
}

double continuous_action(std::span<const double> jump_times,
                         std::span<const double> velocities, double t_final) {
    if (velocities.size() != jump_times.size() + 1)
        throw std::invalid_argument("continuous_action: need one velocity per segment");
    double prev = 0.0;
    for (double s : jump_times) {
        if (!(s > prev) || s > t_final)
            throw std::invalid_argument(
                "continuous_action: jump times must be strictly increasing in (0, T]");
        prev = s;
    }
    double acc = 0.0;
    for (std::size_t k = 1; k < velocities.size(); ++k)
        acc += 0.5 * velocities[k] * velocities[k];
    const std::size_t nstar = jump_times.size();
    for (std::size_t k = 0; k <= nstar; ++k) {
        if (velocities[k] == 0.0) continue;
        double s_lo = (k == 0) ? 0.0 : jump_times[k - 1];
        double s_hi = (k == nstar) ? t_final : jump_times[k];
        acc += s_hi - s_lo;
    }
    return acc;
}

int path_jump_count(std::span<const double> w) {
    int n = 0;
    for (std::size_t k = 1; k < w.size(); ++k)
        if (w[k] != w[k - 1]) ++n;
    return n;
}

double action_gap(std::span<const double> w, double dt) {
    const double t_final = dt * static_cast<double>(w.size() - 1);
    std::vector<double> times;
    std::vector<double> vels = {w[0]};
    for (std::size_t k = 1; k < w.size(); ++k)
        if (w[k] != w[k - 1]) {
            times.push_back(dt * static_cast<double>(k));
            vels.push_back(w[k]);
        }
    double cont = continuous_action(times, vels, t_final);
    double disc = discrete_action(w, dt);
    return std::abs(cont - disc);
}

PhaseField dp_solve(const PhaseField& phi0, const GridSpec& g, int n_steps) {
    const TransportStencil sten = transport_stencil(g);
    if (!exact_transport(sten))
        throw std::invalid_argument(
            "dp_solve: requires an exact-transport grid (v_j dt / dx integer)");
    if (g.dt > 0.5 * g.dv * g.dv * (1.0 + 1e-12))
        throw std::invalid_argument("dp_solve: requires dt <= dv^2/2");
    if (n_steps < 0) throw std::invalid_argument("dp_solve: negative step count");

    const int nx = g.nx;
    const int nv = g.nv;
    // jump_cost(v_k -> v_j) table, target-major
    std::vector<double> cost(static_cast<std::size_t>(nv) * nv);
    for (int j = 0; j < nv; ++j)
        for (int k = 0; k < nv; ++k)
            cost[static_cast<std::size_t>(j) * nv + k] = jump_cost(g.v[k], g.v[j], g.dt);
    std::vector<int> shift(nv);
    for (int k = 0; k < nv; ++k) {
        int b = sten.cell_shift[k] % nx;
        shift[k] = (b + nx) % nx;
    }

    PhaseField cur = phi0;
    PhaseField next(nx, nv);
    for (int step = 0; step < n_steps; ++step) {
        for (int j = 0; j < nv; ++j) {
            const double* cj = cost.data() + static_cast<std::size_t>(j) * nv;
            for (int i = 0; i < nx; ++i) {
                double best = std::numeric_limits<double>::infinity();
                for (int k = 0; k < nv; ++k) {
                    int src = i - shift[k];
                    if (src < 0) src += nx;
                    best = std::min(best, cur(src, k) + cj[k]);
                }
                next(i, j) = best;
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

namespace {

// action of the canonical reduced path [w0:s0][w1:s1][0:flat][v:s2];
// running time counts only nonzero-velocity segments, each velocity change
// costs half the square of the new velocity, jumps to zero are free
double reduced_path_action(double v, double w0, double w1, double s0, double s1,
                           double s2) {
    double acc = 0.5 * v * v;  // final jump, always paid in this branch
    if (s1 > 0.0) acc += 0.5 * w1 * w1;
    if (w0 != 0.0) acc += s0;
    if (w1 != 0.0) acc += s1;
    if (v != 0.0) acc += s2;
    return acc;
}

}  // namespace

ActionValue reduced_action_min(double x, double v, double t_final,
                               const std::function<double(double, double)>& phi_in,
                               const ReducedSearch& search) {
    if (!(t_final > 0.0))
        throw std::invalid_argument("reduced_action_min: t_final must be positive");
    if (!(search.v_step > 0.0) || !(search.s_step > 0.0) || !(search.v_halfwidth > 0.0))
        throw std::invalid_argument("reduced_action_min: invalid search lattice");

    ActionValue best;
    best.value = std::numeric_limits<double>::infinity();

    auto consider = [&](double w0, double w1, double s0, double s1, double s2,
                        double action, double y) {
        double val = phi_in(y, w0) + action;
        if (val < best.value) {
            best.value = val;
            best.action = action;
            best.path = {w0, w1, v, s0, s1, s2, y};
        }
    };

    // free transport: no jump at all, w identically v
    {
        double y = x - v * t_final;
        double action = (v != 0.0) ? t_final : 0.0;
        consider(v, 0.0, t_final, 0.0, 0.0, action, y);
    }

    const int kmax = static_cast<int>(std::round(search.v_halfwidth / search.v_step));
    const int mmax = static_cast<int>(std::floor(t_final / search.s_step + 1e-12));
    auto dur = [&](int m) { return m * search.s_step; };
    // velocities ordered 0, +1, -1, +2, ... so that ties resolve to the
    // smallest-|w| witness (the reduced-path bounds |w0|,|w1| <= |w2|)
    std::vector<double> vel_order;
    vel_order.push_back(0.0);
    for (int k = 1; k <= kmax; ++k) {
        vel_order.push_back(k * search.v_step);
        vel_order.push_back(-k * search.v_step);
    }

    for (double w0 : vel_order) {
        const int m0_max = (w0 == 0.0) ? 0 : mmax;  // zero-velocity time is the flat slot
        for (int m0 = 0; m0 <= m0_max; ++m0) {
            const double s0 = dur(m0);
            // no intermediate state
            for (int m2 = 0; m0 + m2 <= mmax; ++m2) {
                const double s2 = dur(m2);
                double y = x - (s0 * w0 + s2 * v);
                consider(w0, 0.0, s0, 0.0, s2,
                         reduced_path_action(v, w0, 0.0, s0, 0.0, s2), y);
            }
            // one intermediate nonzero state
            for (double w1 : vel_order) {
                if (w1 == 0.0) continue;
                for (int m1 = 1; m0 + m1 <= mmax; ++m1) {
                    const double s1 = dur(m1);
                    for (int m2 = 0; m0 + m1 + m2 <= mmax; ++m2) {
                        const double s2 = dur(m2);
                        double y = x - (s0 * w0 + s1 * w1 + s2 * v);
                        consider(w0, w1, s0, s1, s2,
                                 reduced_path_action(v, w0, w1, s0, s1, s2), y);
                    }
                }
            }
        }
    }
    return best;
}

double longtime_kernel(double t, double x) {
    if (!(t > 0.0)) throw std::invalid_argument("longtime_kernel: t must be positive");
    double ax = std::abs(x);
    if (ax <= std::pow(t, 1.5)) return 1.5 * std::pow(ax, 2.0 / 3.0);
    return ax * ax / (2.0 * t * t) + t;
}

}  // namespace kinhj
