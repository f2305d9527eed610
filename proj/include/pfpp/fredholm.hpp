#pragma once

#include <span>

#include "pfpp/kernels.hpp"

namespace pfpp {

enum class FredholmRoute { Series, SignTracked };

struct FredholmResult {
    Complex value;
    FredholmRoute route;
    int path_steps;   // determinant evaluations along [0,1] (series: subsets)
    double residual;  // |value^2 - det(1 + lift(T))| / max(1, |det|)
};

// Subset-sum form of the determinant expansion on a finite ground set:
// sum over S of qdet(T|_S), including the empty subset. Exponential cost,
// capped at 14 cells; the production path is OpenMP-parallel over subsets.
Complex fredholm_series(const GridKernel& t);
Complex fredholm_series_serial(const GridKernel& t);

// Direct finite-rank value qdet(1 + T) through the Pfaffian.
Complex fredholm_qdet_direct(const GridKernel& t);

// Square root of det(1 + z lift(T)) tracked continuously from value 1 at
// z = 0 to z = 1. Starts from 32 uniform steps, bisects any step whose
// determinant argument moves by more than pi/2, and gives up (DegeneracyError)
// past 2^14 evaluations or on a path through zero.
FredholmResult fredholm_signed(const GridKernel& t);
FredholmResult fredholm_signed(const QMatrix& table);

// E[prod g(x_i)] = qdet(1 + sqrt(g-1) T sqrt(g-1)) for nonnegative g, via the
// sign-tracked route. The principal square-root branch is used; flipping any
// branch flips a row and column sign pair, leaving the value unchanged.
FredholmResult expectation_multiplicative(const GridKernel& t, std::span<const double> g);

// Conjugated kernel sqrt(g-1) T sqrt(g-1) with principal branches.
QMatrix multiplicative_table(const GridKernel& t, std::span<const double> g,
                             bool negate_branch = false);

// P(no points in the window): expectation of the indicator weight 1 - chi_W.
FredholmResult gap_probability(const GridKernel& t, std::span<const int> window);

}  // namespace pfpp
