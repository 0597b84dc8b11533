#include "kinhj/limit_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "kinhj/ap_scheme.hpp"

namespace kinhj {

LimitScheme::LimitScheme(const GridSpec& g) : grid_(g) {
    if (grid_.dt > 0.5 * grid_.dv * grid_.dv * (1.0 + 1e-12))
        std::fprintf(stderr,
                     "LimitScheme: dt = %g exceeds dv^2/2 = %g; the scheme still runs, "
                     "but the mu-decay and representation-formula identities need "
                     "dt <= dv^2/2\n",
                     grid_.dt, 0.5 * grid_.dv * grid_.dv);
    stencil_ = transport_stencil(grid_);
    half_v_sq_.resize(grid_.nv);
    for (int j = 0; j < grid_.nv; ++j) half_v_sq_[j] = 0.5 * grid_.v[j] * grid_.v[j];
}

LimitState LimitScheme::initial_state(
    const std::function<double(double, double)>& phi_in) const {
    LimitState s;
    s.n = 0;
    s.time = 0.0;
    s.phi = PhaseField(grid_.nx, grid_.nv);
    for (int j = 0; j < grid_.nv; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            double val = phi_in(grid_.x[i], grid_.v[j]);
            if (!std::isfinite(val))
                throw std::invalid_argument("LimitScheme: non-finite initial value");
            s.phi(i, j) = val;
        }
    PhaseField shifted;
    transport_field(s.phi, stencil_, shifted);
    s.mu = transported_min(shifted);
    return s;
}

void LimitScheme::step(const LimitState& in, LimitState& out) const {
    step(in, out, grid_.dt);
}

void LimitScheme::step(const LimitState& in, LimitState& out, double dt) const {
    const TransportStencil& sten =
        (dt == grid_.dt) ? stencil_ : transport_stencil(grid_, dt);
    transport_field(in.phi, sten, out.phi);
    out.mu = transported_min(out.phi);
    for (int j = 0; j < grid_.nv; ++j) {
        const double q = half_v_sq_[j];
        for (int i = 0; i < grid_.nx; ++i)
            out.phi(i, j) = std::min(out.phi(i, j) + dt, q + out.mu[i]);
    }
    out.n = in.n + 1;
    out.time = in.time + dt;
}

void LimitScheme::run(LimitState& s, int n_steps) const {
    if (n_steps < 0) throw std::invalid_argument("LimitScheme::run: negative step count");
    LimitState next;
    for (int k = 0; k < n_steps; ++k) {
        step(s, next);
        std::swap(s, next);
    }
}

void LimitScheme::run_to_final(LimitState& s) const {
    LimitState next;
    for (int k = 0; k < grid_.nt; ++k) {
        double dt = (k + 1 == grid_.nt) ? grid_.dt_last : grid_.dt;
        step(s, next, dt);
        std::swap(s, next);
    }
}

PhaseField variational_residual(const LimitState& prev, const LimitState& next,
                                const GridSpec& g, double dt) {
    PhaseField shifted;
    transport_field(prev.phi, transport_stencil(g, dt), shifted);
    PhaseField res(g.nx, g.nv);
    for (int j = 0; j < g.nv; ++j) {
        const double q = 0.5 * g.v[j] * g.v[j];
        for (int i = 0; i < g.nx; ++i) {
            double transport_branch = (next.phi(i, j) - shifted(i, j)) / dt - 1.0;
            double jump_branch = next.phi(i, j) - q - next.mu[i];
            res(i, j) = std::max(transport_branch, jump_branch);
        }
    }
    return res;
}

MinLinkCheck check_min_link(const LimitState& s) {
    if (s.n < 1)
        throw std::invalid_argument(
            "check_min_link: defined for n >= 1 (mu^0 is the transported minimum)");
    MinLinkCheck c;
    for (int i = 0; i < s.phi.nx(); ++i) {
        double best = s.phi(i, 0);
        for (int j = 1; j < s.phi.nv(); ++j) best = std::min(best, s.phi(i, j));
        c.max_dev = std::max(c.max_dev, std::abs(s.mu[i] - best));
    }
    c.ok = c.max_dev <= 1e-12;
    return c;
}

bool check_mu_decay(const std::vector<SpatialField>& mu_history, double slack) {
    for (std::size_t k = 0; k + 1 < mu_history.size(); ++k) {
        const auto& cur = mu_history[k];
        const auto& nxt = mu_history[k + 1];
        for (std::size_t i = 0; i < cur.size(); ++i)
            if (nxt[i] > cur[i] + slack) return false;
    }
    return true;
}

}  // namespace kinhj
