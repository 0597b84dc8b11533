#pragma once

#include <functional>
#include <string>

#include "kinhj/grid.hpp"

namespace kinhj {

/// Two-well benchmark data of the experiment suite (preset "paper-init"):
/// min{3(v-3)^2+5, 5(v+7)^2+2} + 0.9 cos(4 pi x v / (x_star v_star)).
double two_well_data(double x, double v, double x_star, double v_star);

/// Equilibrium v^2/2 (evaluated as 0.5*v*v; any variant of the halving is
/// bit-identical, which the exact-preservation tests rely on).
double equilibrium_data(double v);

/// Dirac surrogate: 0 on cells with |x - center| < halfwidth, plateau
/// elsewhere, independent of v.
double dirac_data(double x, double center, double halfwidth, double plateau);

/// Named presets: "paper-init" | "equilibrium" | "dirac" | "two-dirac".
/// dirac_cells = total number of zeroed cells across the support of each
/// Dirac (halfwidth = dirac_cells/2 * dx). Two-dirac centers sit at -+5.
/// Throws std::invalid_argument for unknown names.
std::function<double(double, double)> make_initial_data(const std::string& name,
                                                        const GridSpec& g,
                                                        int dirac_cells = 2,
                                                        double plateau = 100.0);

}  // namespace kinhj
