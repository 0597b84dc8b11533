#include "kinhj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinhj {

GridSpec build_grid(double x_star, double v_star, int nx, int nv, double dt,
                    double t_final) {
    if (!(x_star > 0.0) || !(v_star > 0.0))
        throw std::invalid_argument("build_grid: domain half-widths must be positive");
    if (nx < 1 || nv < 1)
        throw std::invalid_argument("build_grid: cell counts must be positive");
    if (nv % 2 == 0)
        throw std::invalid_argument("build_grid: nv must be odd so that v = 0 is a node");
    if (!(dt > 0.0) || !(t_final > 0.0))
        throw std::invalid_argument("build_grid: dt and t_final must be positive");

    GridSpec g;
    g.x_star = x_star;
    g.v_star = v_star;
    g.nx = nx;
    g.nv = nv;
    g.dt = dt;
    g.t_final = t_final;
    g.dx = 2.0 * x_star / nx;
    g.dv = 2.0 * v_star / nv;

    // Centered node formulas: algebraically -x_star + (i+1/2) dx, written so
    // that the center node of an odd count is exactly zero.
    g.x.resize(nx);
    for (int i = 0; i < nx; ++i) g.x[i] = g.dx * (i - (nx - 1) / 2.0);
    g.v.resize(nv);
    for (int j = 0; j < nv; ++j) g.v[j] = g.dv * (j - (nv - 1) / 2.0);

    // Steps reach t_final exactly; the last one is shortened unless
    // t_final/dt is integral to 1e-9 relative.
    double ratio = t_final / dt;
    auto n_full = static_cast<long long>(std::floor(ratio + 1e-9));
    double tol = 1e-9 * std::max(t_final, dt);
    if (n_full >= 1 && std::abs(static_cast<double>(n_full) * dt - t_final) <= tol) {
        g.nt = static_cast<int>(n_full);
        g.dt_last = dt;
    } else {
        g.nt = static_cast<int>(n_full) + 1;
        g.dt_last = t_final - static_cast<double>(n_full) * dt;
    }
    return g;
}

double velocity_quadrature(std::span<const double> row, double dv) {
    double acc = 0.0;
    for (double u : row) acc += u * dv;
    return acc;
}

double gaussian_norm_const(double eps, const GridSpec& g) {
    if (!(eps > 0.0)) throw std::invalid_argument("gaussian_norm_const: eps must be positive");
    std::vector<double> row(g.nv);
    for (int j = 0; j < g.nv; ++j) {
        double q = 0.5 * g.v[j] * g.v[j];
        row[j] = std::exp(-(q / eps));
    }
    return velocity_quadrature(row, g.dv);
}

TransportStencil transport_stencil(const GridSpec& g) { return transport_stencil(g, g.dt); }

TransportStencil transport_stencil(const GridSpec& g, double dt) {
    TransportStencil s;
    s.cell_shift.resize(g.nv);
    s.frac.resize(g.nv);
    for (int j = 0; j < g.nv; ++j) {
        double theta = g.v[j] * dt / g.dx;
        double snapped = std::round(theta);
        if (std::abs(theta - snapped) <= 1e-9 * std::max(1.0, std::abs(theta))) {
            // exact-transport grids: the product carries rounding noise that
            // would otherwise flip floor() and put alpha at 1-ulp-below-1
            s.cell_shift[j] = static_cast<int>(snapped);
            s.frac[j] = 0.0;
        } else {
            double b = std::floor(theta);
            s.cell_shift[j] = static_cast<int>(b);
            s.frac[j] = theta - b;
        }
    }
    return s;
}

bool exact_transport(const TransportStencil& s) {
    return std::all_of(s.frac.begin(), s.frac.end(), [](double a) { return a == 0.0; });
}

void interpolate_row(std::span<const double> in, int beta, double alpha,
                     std::span<double> out) {
    const int n = static_cast<int>(in.size());
    // normalized backward shift: source index for out[i] is (i - beta) mod n
    int shift = ((beta % n) + n) % n;
    if (alpha == 0.0) {
        for (int i = 0; i < n; ++i) {
            int i0 = i - shift;
            if (i0 < 0) i0 += n;
            out[i] = in[i0];
        }
        return;
    }
    for (int i = 0; i < n; ++i) {
        int i0 = i - shift;
        if (i0 < 0) i0 += n;
        int i1 = i0 - 1;
        if (i1 < 0) i1 += n;
        double a = in[i0];
        double b = in[i1];
        double r = a + alpha * (b - a);
        // clamp to the source cells: the convex-combination bounds hold
        // exactly, not just to rounding
        double lo = std::min(a, b);
        double hi = std::max(a, b);
        out[i] = std::clamp(r, lo, hi);
    }
}

std::vector<double> interpolate_shift(const PhaseField& f, const TransportStencil& s,
                                      int j) {
    std::vector<double> out(f.nx());
    interpolate_row(f.row(j), s.cell_shift[j], s.frac[j], out);
    return out;
}

void transport_field(const PhaseField& in, const TransportStencil& s, PhaseField& out) {
    assert(&in != &out);  // rows are written while the source is still read
    if (!out.same_shape(in)) out = PhaseField(in.nx(), in.nv());
    for (int j = 0; j < in.nv(); ++j)
        interpolate_row(in.row(j), s.cell_shift[j], s.frac[j], out.row(j));
}

}  // namespace kinhj
