#pragma once

#include <functional>

#include "kinhj/grid.hpp"

namespace kinhj {

/// State of the asymptotic-preserving scheme: Hopf-Cole potential phi(i,j)
/// and its velocity-marginal mu(i) at time index n.
struct ApState {
    double eps = 1.0;
    int n = 0;
    double time = 0.0;
    SpatialField mu;
    PhaseField phi;
};

/// m_i = min_j of the transported field (softmin anchor of the mu update).
SpatialField transported_min(const PhaseField& phi_shifted);

/// Stabilized mu update:
///   mu_i = m_i - eps ln( <exp(-(phibar_ij - m_i)/eps)>_dv ).
/// All exponents are nonpositive; at least one term equals 1, so the result
/// is finite for every eps in (0,1].
SpatialField update_mu(const PhaseField& phi_shifted, const SpatialField& little_m,
                       double eps, const GridSpec& g);

/// Entrywise min{ phibar_ij + dt, v_j^2/2 + mu_i } — the shift that makes
/// both exponents of the phi update nonpositive.
PhaseField exponent_shift(const PhaseField& phi_shifted, const SpatialField& mu_next,
                          const GridSpec& g, double dt);

/// Fully discrete scheme for the scaled kinetic equation in Hopf-Cole form,
/// uniformly stable in eps. The two-phase step updates mu first (explicit by
/// mass conservation), then phi; cost per step is O(nx*nv) independent of eps.
class ApScheme {
public:
    /// Requires 0 < eps <= 1 (eps = 0 is the limit scheme's job).
    ApScheme(const GridSpec& g, double eps);

    /// phi(i,j) = phi_in(x_i, v_j); mu = min over j of the transported
    /// initial data. Throws on non-finite initial values.
    ApState initial_state(const std::function<double(double, double)>& phi_in) const;

    void step(const ApState& in, ApState& out) const;
    void step(const ApState& in, ApState& out, double dt) const;

    /// n_steps applications of step at the grid dt.
    void run(ApState& s, int n_steps) const;

    /// All grid.nt steps, the last one shortened to grid.dt_last.
    void run_to_final(ApState& s) const;

    const GridSpec& grid() const { return grid_; }
    double eps() const { return eps_; }
    double norm_const() const { return c_eps_; }

private:
    GridSpec grid_;
    double eps_;
    double c_eps_;      // c_dv^eps
    double eps_ln_c_;   // eps * ln(c_dv^eps)
    TransportStencil stencil_;
    std::vector<double> half_v_sq_;
};

}  // namespace kinhj
