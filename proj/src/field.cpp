#include "kinhj/field.hpp"

#include <algorithm>
#include <cmath>

namespace kinhj {

double sup_norm(const PhaseField& f) {
    double m = 0.0;
    for (double x : f.data()) m = std::max(m, std::abs(x));
    return m;
}

double sup_diff(const PhaseField& a, const PhaseField& b) {
    assert(a.same_shape(b));
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

double sup_diff(const SpatialField& a, const SpatialField& b) {
    assert(a.size() == b.size());
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

bool all_finite(const PhaseField& f) {
    return std::all_of(f.data().begin(), f.data().end(),
                       [](double x) { return std::isfinite(x); });
}

}  // namespace kinhj
