#pragma once

#include <memory>
#include <span>

#include "pfpp/kernels.hpp"

namespace pfpp {

// Kernel conditioned on a point of the process at x0:
// K'(x, y) = K(x, y) - K(x, x0) K(x0, y) / K(x0, x0).
// The intensity at x0 must be a positive real scalar; K'(x0, .) vanishes.
class PalmKernel : public Kernel {
public:
    PalmKernel(std::shared_ptr<const Kernel> base, double x0);
    Quaternion operator()(double x, double y) const override;
    double point() const { return x0_; }

private:
    std::shared_ptr<const Kernel> base_;
    double x0_;
    Complex inv_density_;
};

std::shared_ptr<const Kernel> palm(std::shared_ptr<const Kernel> k, double x0);
// Iterated reduction; the result does not depend on the order of the points.
std::shared_ptr<const Kernel> palm(std::shared_ptr<const Kernel> k,
                                   std::span<const double> points);

// Grid forms operate on the weight-folded table directly (the sqrt(w) factors
// cancel in the rank-one update). The reduced cell keeps its slot with zero
// intensity.
GridKernel palm_grid(const GridKernel& k, int cell);
GridKernel palm_grid(const GridKernel& k, std::span<const int> cells);

// Multiplicative-weight transform sqrt(g) K (1 + (g-1) K)^{-1} sqrt(g) for a
// nonnegative weight per cell. Computed through the complex lift; throws
// DegeneracyError when the resolvent condition number exceeds 1e12.
GridKernel kg_transform(const GridKernel& k, std::span<const double> g);

// Kernel of the process outside `window` conditioned on the exact occupancy
// pattern inside it: reduce at the occupied cells, then
// chi_c K' (1 - chi_B K')^{-1} chi_c restricted to the complement cells.
GridKernel conditional_kernel(const GridKernel& k, std::span<const int> window,
                              std::span<const int> occupied);

}  // namespace pfpp
