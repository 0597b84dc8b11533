#pragma once

#include <functional>
#include <span>

#include "kinhj/grid.hpp"

namespace kinhj {

/// Cost of moving from velocity w to velocity v across one time interval:
/// dt if the velocity is kept and nonzero, |v|^2/2 if it changes.
double jump_cost(double w, double v, double dt);

/// Action of a time-discrete path given by its per-interval velocities
/// w[0..N], accumulated as sum_k jump_cost(w[k], w[k+1], dt).
double discrete_action(std::span<const double> w, double dt);

/// Action of a piecewise-linear path with instantaneous jumps:
/// 1/2 sum_{k>=1} |w_k|^2 + sum_k (s_{k+1}-s_k) 1_{w_k != 0},
/// with s_0 = 0, s_{N*+1} = t_final. jump_times must be strictly increasing
/// in (0, t_final].
double continuous_action(std::span<const double> jump_times,
                         std::span<const double> velocities, double t_final);

/// Number of velocity changes in a per-interval sequence.
int path_jump_count(std::span<const double> w);

/// |continuous - discrete| action of the same grid path; bounded by
/// path_jump_count(w) * dt.
double action_gap(std::span<const double> w, double dt);

/// Dynamic-programming evaluation of the per-step representation recursion
///   phi^{k+1}_j(x) = min_w [ phi^k_{j(w)}(x - dt w) + jump_cost(w, v_j, dt) ]
/// by explicit minimization over the velocity grid. Requires an
/// exact-transport grid (v_j dt / dx integer for all j) and dt <= dv^2/2;
/// on such grids it reproduces the limit scheme exactly.
PhaseField dp_solve(const PhaseField& phi0, const GridSpec& g, int n_steps);

/// Witness trajectory of the reduced (<= 2 jump) minimization: initial
/// velocity w0 held for s0, intermediate w1 for s1, a costless zero-velocity
/// rest, and the final velocity w2 for s2, starting from position y.
struct ReducedPath {
    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    double y = 0.0;
};

struct ActionValue {
    double value = 0.0;   ///< phi_in(y, w0) + action
    double action = 0.0;  ///< path action alone (>= 0)
    ReducedPath path;
};

/// Search lattice of the brute-force reduced minimization.
struct ReducedSearch {
    double v_halfwidth = 0.0;  ///< velocities in [-v_halfwidth, v_halfwidth]
    double v_step = 0.0;       ///< grid-derived choice: dv/4
    double s_step = 0.0;       ///< grid-derived choice: dt
};

/// Brute-force minimization of phi_in(y, w0) + reduced action over the
/// free-transport branch and the <= 2 jump family, with target (x, v) at
/// time t_final. Cost is O(|W|^2 |S|^3): intended for coarse lattices.
ActionValue reduced_action_min(double x, double v, double t_final,
                               const std::function<double(double, double)>& phi_in,
                               const ReducedSearch& search);

/// Long-time action between x and the origin:
/// 3/2 |x|^{2/3} inside |x| <= t^{3/2}, |x|^2/(2 t^2) + t outside.
/// Both branches meet at 3t/2 on the interface.
double longtime_kernel(double t, double x);

}  // namespace kinhj
