#pragma once

#include <functional>
#include <vector>

#include "kinhj/grid.hpp"

namespace kinhj {

struct LimitState {
    int n = 0;
    double time = 0.0;
    SpatialField mu;
    PhaseField phi;
};

/// Min-plus scheme for the nonlocal Hamilton-Jacobi system (the eps -> 0
/// limit of the AP scheme, implemented as an independent code path):
///   mu_i^{n+1}  = min_j phibar_ij^n,
///   phi_ij^{n+1} = min{ phibar_ij^n + dt, v_j^2/2 + mu_i^{n+1} }.
class LimitScheme {
public:
    explicit LimitScheme(const GridSpec& g);

    LimitState initial_state(const std::function<double(double, double)>& phi_in) const;

    void step(const LimitState& in, LimitState& out) const;
    void step(const LimitState& in, LimitState& out, double dt) const;

    void run(LimitState& s, int n_steps) const;
    void run_to_final(LimitState& s) const;

    const GridSpec& grid() const { return grid_; }

private:
    GridSpec grid_;
    TransportStencil stencil_;
    std::vector<double> half_v_sq_;
};

/// Max-form residual of one limit step (zero identically for states produced
/// by step):  max{ (phi^{n+1} - phibar^n)/dt - 1, phi^{n+1} - v^2/2 - mu^{n+1} }.
PhaseField variational_residual(const LimitState& prev, const LimitState& next,
                                const GridSpec& g, double dt);

struct MinLinkCheck {
    bool ok = false;
    double max_dev = 0.0;
};

/// mu_i == min_j phi_ij to 1e-12, valid for n >= 1 (throws for n = 0, where
/// mu is the transported minimum of the initial data instead).
MinLinkCheck check_min_link(const LimitState& s);

/// Monotone decay of mu along a trajectory: mu^{k+1} <= mu^k + slack for all
/// consecutive entries of the history. Only meaningful under dt <= dv^2/2.
bool check_mu_decay(const std::vector<SpatialField>& mu_history, double slack = 1e-12);

}  // namespace kinhj
