#include "kinhj/ap_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinhj {

SpatialField transported_min(const PhaseField& phi_shifted) {
    SpatialField m(phi_shifted.nx());
    for (int i = 0; i < phi_shifted.nx(); ++i) {
        double best = phi_shifted(i, 0);
        for (int j = 1; j < phi_shifted.nv(); ++j)
            best = std::min(best, phi_shifted(i, j));
        m[i] = best;
    }
    return m;
}

SpatialField update_mu(const PhaseField& phi_shifted, const SpatialField& little_m,
                       double eps, const GridSpec& g) {
    SpatialField mu(g.nx);
    std::vector<double> row(g.nv);
    for (int i = 0; i < g.nx; ++i) {
        // all exponents <= 0 and the minimizing one is exactly 0
        for (int j = 0; j < g.nv; ++j)
            row[j] = std::exp(-((phi_shifted(i, j) - little_m[i]) / eps));
        mu[i] = little_m[i] - eps * std::log(velocity_quadrature(row, g.dv));
    }
    return mu;
}

PhaseField exponent_shift(const PhaseField& phi_shifted, const SpatialField& mu_next,
                          const GridSpec& g, double dt) {
    PhaseField m(g.nx, g.nv);
    for (int j = 0; j < g.nv; ++j) {
        double q = 0.5 * g.v[j] * g.v[j];
        for (int i = 0; i < g.nx; ++i)
            m(i, j) = std::min(phi_shifted(i, j) + dt, q + mu_next[i]);
    }
    return m;
}

ApScheme::ApScheme(const GridSpec& g, double eps) : grid_(g), eps_(eps) {
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument(
            "ApScheme: eps must be in (0,1]; eps = 0 is handled by LimitScheme");
    c_eps_ = gaussian_norm_const(eps_, grid_);
    eps_ln_c_ = eps_ * std::log(c_eps_);
    stencil_ = transport_stencil(grid_);
    half_v_sq_.resize(grid_.nv);
    for (int j = 0; j < grid_.nv; ++j) half_v_sq_[j] = 0.5 * grid_.v[j] * grid_.v[j];
}

ApState ApScheme::initial_state(const std::function<double(double, double)>& phi_in) const {
    ApState s;
    s.eps = eps_;
    s.n = 0;
    s.time = 0.0;
    s.phi = PhaseField(grid_.nx, grid_.nv);
    for (int j = 0; j < grid_.nv; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            double val = phi_in(grid_.x[i], grid_.v[j]);
            if (!std::isfinite(val))
                throw std::invalid_argument("ApScheme: non-finite initial value");
            s.phi(i, j) = val;
        }
    PhaseField shifted;
    transport_field(s.phi, stencil_, shifted);
    s.mu = transported_min(shifted);
    return s;
}

void ApScheme::step(const ApState& in, ApState& out) const { step(in, out, grid_.dt); }

void ApScheme::step(const ApState& in, ApState& out, double dt) const {
    const TransportStencil& sten =
        (dt == grid_.dt) ? stencil_ : transport_stencil(grid_, dt);
    // out.phi doubles as the transported-field buffer; each cell is read once
    // and then overwritten.
    transport_field(in.phi, sten, out.phi);

    SpatialField m = transported_min(out.phi);
    out.mu = update_mu(out.phi, m, eps_, grid_);

    const double a = std::exp(-(dt / eps_));  // flushes to 0 for dt/eps > ~700
    const double om_a = 1.0 - a;
    for (int i = 0; i < grid_.nx; ++i) {
        // mu_tilde = mu + eps ln c absorbs the 1/c factor of the Maxwellian
        // branch; with the shift min{phibar+dt, v^2/2+mu_tilde} both
        // exponents stay nonpositive and the equilibrium cancels exactly.
        const double mu_tilde = out.mu[i] + eps_ln_c_;
        for (int j = 0; j < grid_.nv; ++j) {
            const double pb = out.phi(i, j);
            const double d = (pb - half_v_sq_[j] - mu_tilde) + dt;
            if (d >= 0.0) {
                out.phi(i, j) =
                    (half_v_sq_[j] + mu_tilde) - eps_ * std::log(std::exp(-(d / eps_)) + om_a);
            } else {
                out.phi(i, j) = (pb + dt) - eps_ * std::log1p(om_a * std::exp(d / eps_));
            }
        }
    }
    out.eps = eps_;
    out.n = in.n + 1;
    out.time = in.time + dt;
}

void ApScheme::run(ApState& s, int n_steps) const {
    if (n_steps < 0) throw std::invalid_argument("ApScheme::run: negative step count");
    ApState next;
    for (int k = 0; k < n_steps; ++k) {
        step(s, next);
        std::swap(s, next);
    }
}

void ApScheme::run_to_final(ApState& s) const {
    ApState next;
    for (int k = 0; k < grid_.nt; ++k) {
        double dt = (k + 1 == grid_.nt) ? grid_.dt_last : grid_.dt;
        step(s, next, dt);
        std::swap(s, next);
    }
}

}  // namespace kinhj
