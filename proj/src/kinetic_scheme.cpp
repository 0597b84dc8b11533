#include "kinhj/kinetic_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kinhj {

double cfl_max_dt(const GridSpec& g, double eps) {
    double vmax = 0.0;
    for (double v : g.v) vmax = std::max(vmax, std::abs(v));
    double transport = vmax > 0.0 ? g.dx / vmax : std::numeric_limits<double>::infinity();
    return 0.9 * std::min(transport, eps);
}

KineticScheme::KineticScheme(const GridSpec& g, double eps) : grid_(g), eps_(eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("KineticScheme: eps must be positive");
    double c = gaussian_norm_const(eps_, grid_);
    maxwellian_.resize(grid_.nv);
    for (int j = 0; j < grid_.nv; ++j) {
        double q = 0.5 * grid_.v[j] * grid_.v[j];
        maxwellian_[j] = std::exp(-(q / eps_)) / c;
    }
}

KineticState KineticScheme::initial_state(
    const std::function<double(double, double)>& phi_in) const {
    KineticState s;
    s.eps = eps_;
    s.n = 0;
    s.time = 0.0;
    s.f = PhaseField(grid_.nx, grid_.nv);
    for (int j = 0; j < grid_.nv; ++j)
        for (int i = 0; i < grid_.nx; ++i)
            s.f(i, j) = std::exp(-phi_in(grid_.x[i], grid_.v[j]) / eps_);
    return s;
}

void KineticScheme::step(const KineticState& in, KineticState& out) const {
    step(in, out, grid_.dt);
}

void KineticScheme::step(const KineticState& in, KineticState& out, double dt) const {
    if (dt > cfl_max_dt(grid_, eps_) * (1.0 + 1e-12))
        throw std::runtime_error("KineticScheme: dt violates the CFL bound");
    if (!out.f.same_shape(in.f)) out.f = PhaseField(grid_.nx, grid_.nv);

    SpatialField rho(grid_.nx);
    std::vector<double> col(grid_.nv);
    for (int i = 0; i < grid_.nx; ++i) {
        for (int j = 0; j < grid_.nv; ++j) col[j] = in.f(i, j);
        rho[i] = velocity_quadrature(col, grid_.dv);
    }

    const int nx = grid_.nx;
    for (int j = 0; j < grid_.nv; ++j) {
        const double v = grid_.v[j];
        const double vp = std::max(v, 0.0);
        const double vm = std::min(v, 0.0);
        const double mj = maxwellian_[j];
        for (int i = 0; i < nx; ++i) {
            int il = (i == 0) ? nx - 1 : i - 1;
            int ir = (i == nx - 1) ? 0 : i + 1;
            double adv = vp * (in.f(i, j) - in.f(il, j)) / grid_.dx +
                         vm * (in.f(ir, j) - in.f(i, j)) / grid_.dx;
            out.f(i, j) =
                in.f(i, j) - dt * adv + (dt / eps_) * (rho[i] * mj - in.f(i, j));
        }
    }
    out.eps = eps_;
    out.n = in.n + 1;
    out.time = in.time + dt;
}

void KineticScheme::run(KineticState& s, int n_steps) const {
    if (n_steps < 0) throw std::invalid_argument("KineticScheme::run: negative step count");
    KineticState next;
    for (int k = 0; k < n_steps; ++k) {
        step(s, next);
        std::swap(s, next);
    }
}

void KineticScheme::run_to_final(KineticState& s) const {
    KineticState next;
    for (int k = 0; k < grid_.nt; ++k) {
        double dt = (k + 1 == grid_.nt) ? grid_.dt_last : grid_.dt;
        step(s, next, dt);
        std::swap(s, next);
    }
}

double KineticScheme::mass(const KineticState& s) const {
    double acc = 0.0;
    for (double x : s.f.data()) acc += x;
    return acc * grid_.dx * grid_.dv;
}

PhaseField hopf_cole_of_f(const KineticState& s) {
    PhaseField psi(s.f.nx(), s.f.nv());
    const double floor_val = std::numeric_limits<double>::min();
    for (std::size_t k = 0; k < s.f.data().size(); ++k)
        psi.data()[k] = -s.eps * std::log(std::max(s.f.data()[k], floor_val));
    return psi;
}

}  // namespace kinhj
