#include "kinhj/presets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kinhj {

double two_well_data(double x, double v, double x_star, double v_star) {
    double a = 3.0 * (v - 3.0) * (v - 3.0) + 5.0;
    double b = 5.0 * (v + 7.0) * (v + 7.0) + 2.0;
    double osc = 0.9 * std::cos(4.0 * std::numbers::pi * x * v / (x_star * v_star));
    return std::min(a, b) + osc;
}

double equilibrium_data(double v) { return 0.5 * v * v; }

double dirac_data(double x, double center, double halfwidth, double plateau) {
    return std::abs(x - center) < halfwidth ? 0.0 : plateau;
}

std::function<double(double, double)> make_initial_data(const std::string& name,
                                                        const GridSpec& g,
                                                        int dirac_cells,
                                                        double plateau) {
    if (name == "paper-init") {
        double xs = g.x_star, vs = g.v_star;
        return [xs, vs](double x, double v) { return two_well_data(x, v, xs, vs); };
    }
    if (name == "equilibrium") {
        return [](double, double v) { return equilibrium_data(v); };
    }
    // Dirac mass in position times a Gaussian in velocity: the Hopf-Cole
    // transform carries the v^2/2 weight on top of the position surrogate.
    double hw = 0.5 * dirac_cells * g.dx;
    if (name == "dirac") {
        return [hw, plateau](double x, double v) {
            return 0.5 * v * v + dirac_data(x, 0.0, hw, plateau);
        };
    }
    if (name == "two-dirac") {
        return [hw, plateau](double x, double v) {
            return 0.5 * v * v + std::min(dirac_data(x, -5.0, hw, plateau),
                                          dirac_data(x, 5.0, hw, plateau));
        };
    }
    throw std::invalid_argument("unknown initial-data preset: " + name);
}

}  // namespace kinhj
