#pragma once

#include <functional>

#include "kinhj/grid.hpp"

namespace kinhj {

/// Distribution-function state of the explicit baseline scheme.
struct KineticState {
    double eps = 1.0;
    int n = 0;
    double time = 0.0;
    PhaseField f;  ///< nonnegative
};

/// Largest stable step of the explicit scheme:
/// 0.9 * min( dx / max_j |v_j|, eps ) — transport CFL joined with the
/// explicit-relaxation bound.
double cfl_max_dt(const GridSpec& g, double eps);

/// Classical explicit upwind/BGK scheme for the scaled kinetic equation.
/// Non-AP on purpose: this is the comparison baseline whose time step
/// collapses as eps -> 0.
class KineticScheme {
public:
    KineticScheme(const GridSpec& g, double eps);

    /// f(i,j) = exp(-phi_in(x_i, v_j)/eps); underflow to 0 is allowed.
    KineticState initial_state(const std::function<double(double, double)>& phi_in) const;

    /// One forward-Euler step with signed upwind transport and explicit BGK
    /// relaxation toward rho M^eps. Throws if dt exceeds cfl_max_dt.
    void step(const KineticState& in, KineticState& out) const;
    void step(const KineticState& in, KineticState& out, double dt) const;

    void run(KineticState& s, int n_steps) const;
    void run_to_final(KineticState& s) const;

    const GridSpec& grid() const { return grid_; }
    double eps() const { return eps_; }

    /// Total discrete mass sum_ij f dx dv (conserved per step to rounding).
    double mass(const KineticState& s) const;

private:
    GridSpec grid_;
    double eps_;
    std::vector<double> maxwellian_;  ///< M^eps_j, normalized so <M>_dv = 1
};

/// psi = -eps ln(max(f, smallest positive normal)); the clamp makes the
/// machine-epsilon tails of f finite after the log.
PhaseField hopf_cole_of_f(const KineticState& s);

}  // namespace kinhj
