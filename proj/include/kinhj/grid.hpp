#pragma once

#include <span>
#include <vector>

#include "kinhj/field.hpp"

namespace kinhj {

/// Truncated periodic phase-space discretization.
///
/// Cell-centered uniform grids on [-x_star, x_star] x [-v_star, v_star]:
///   x_i = -x_star + (i - 1/2) dx,  v_j = -v_star + (j - 1/2) dv  (1-based),
/// with periodic wrap in x and no flux in v. n_v must be odd so that v = 0
/// is a velocity node (it is then exact in floating point as well).
///
/// Time stepping: n_t steps reach t_final exactly; all steps have size dt
/// except possibly the last one, which is shortened to dt_last when
/// t_final / dt is not an integer (to one part in 1e9).
struct GridSpec {
    double x_star = 0.0;
    double v_star = 0.0;
    int nx = 0;
    int nv = 0;
    double dt = 0.0;
    double t_final = 0.0;

    // derived
    double dx = 0.0;
    double dv = 0.0;
    int nt = 0;
    double dt_last = 0.0;
    std::vector<double> x;  ///< cell centers, size nx
    std::vector<double> v;  ///< velocity nodes, size nv
};

/// Validates parameters and derives steps, nodes and the step count.
/// Throws std::invalid_argument on nonpositive sizes or even n_v.
GridSpec build_grid(double x_star, double v_star, int nx, int nv, double dt,
                    double t_final);

/// First-order quadrature  <u>_dv = sum_j u_j dv.
double velocity_quadrature(std::span<const double> row, double dv);

/// c_dv^eps = sum_j exp(-v_j^2 / (2 eps)) dv over the truncated grid.
/// Requires eps > 0.
double gaussian_norm_const(double eps, const GridSpec& g);

/// Semi-Lagrangian shift of one time step: row j of a field is evaluated at
/// x_i - dt v_j by linear interpolation between the two surrounding nodes.
/// cell_shift = floor(v_j dt / dx), frac in [0,1) the fractional part; values
/// of v_j dt / dx within 1e-9 of an integer are snapped so that grids built
/// for exact transport produce a pure index shift.
struct TransportStencil {
    std::vector<int> cell_shift;  ///< beta_j
    std::vector<double> frac;     ///< alpha_j
};

TransportStencil transport_stencil(const GridSpec& g);
TransportStencil transport_stencil(const GridSpec& g, double dt);

/// True when every frac is zero (transport is a pure index shift).
bool exact_transport(const TransportStencil& s);

/// Interpolates one periodic row at the shifted points:
/// out[i] = (1-alpha) in[i-beta] + alpha in[i-beta-1], indices mod n.
/// The result is clamped to the two source values, so constants, bounds and
/// inequalities are preserved exactly.
void interpolate_row(std::span<const double> in, int beta, double alpha,
                     std::span<double> out);

/// Row-j shift of a full field; returns the transported row over i.
std::vector<double> interpolate_shift(const PhaseField& f,
                                      const TransportStencil& s, int j);

/// Applies interpolate_row to every velocity row of `in`.
void transport_field(const PhaseField& in, const TransportStencil& s,
                     PhaseField& out);

}  // namespace kinhj
