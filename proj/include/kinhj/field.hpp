#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace kinhj {

/// Position-indexed scalar field (mu, m, rho, ...).
using SpatialField = std::vector<double>;

/// Phase-space array u(i,j) on an Nx x Nv lattice. Rows (fixed velocity
/// index j) are contiguous in the position index i, which is the access
/// pattern of the transport step. Indices are 0-based.
class PhaseField {
public:
    PhaseField() = default;
    PhaseField(int nx, int nv, double fill = 0.0)
        : nx_(nx), nv_(nv),
          data_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nv), fill) {}

    int nx() const { return nx_; }
    int nv() const { return nv_; }

    double& operator()(int i, int j) { return data_[index(i, j)]; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }

    std::span<double> row(int j) {
        return {data_.data() + index(0, j), static_cast<std::size_t>(nx_)};
    }
    std::span<const double> row(int j) const {
        return {data_.data() + index(0, j), static_cast<std::size_t>(nx_)};
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const PhaseField& o) const { return nx_ == o.nx_ && nv_ == o.nv_; }

private:
    std::size_t index(int i, int j) const {
        assert(i >= 0 && i < nx_ && j >= 0 && j < nv_);
        return static_cast<std::size_t>(j) * nx_ + i;
    }

    int nx_ = 0;
    int nv_ = 0;
    std::vector<double> data_;
};

double sup_norm(const PhaseField& f);
double sup_diff(const PhaseField& a, const PhaseField& b);
double sup_diff(const SpatialField& a, const SpatialField& b);
bool all_finite(const PhaseField& f);

}  // namespace kinhj
