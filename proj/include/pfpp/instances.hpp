#pragma once

#include "pfpp/kernels.hpp"
#include "pfpp/rng.hpp"

namespace pfpp {

// Random problem instances for the verification suite and the tests.
// Everything is driven by a CounterRng so instance streams are reproducible
// and independent of evaluation order.

Complex random_complex(CounterRng& rng, double scale = 1.0);
Quaternion random_quaternion(CounterRng& rng, double scale = 1.0);

// Self-adjoint: conjugate-mirrored off-diagonal entries, scalar diagonal.
QMatrix random_self_adjoint(CounterRng& rng, int n, double scale = 1.0);

// Self-adjoint core with row and column k replaced by free quaternions.
QMatrix random_almost_self_adjoint(CounterRng& rng, int n, int k, double scale = 1.0);

// Real symmetric rank-r projection embedded as a scalar grid kernel on unit
// cells; always a valid process law.
GridKernel random_projection_kernel(CounterRng& rng, int cells, int rank);

// Uniform discretization with the cell width chosen so every occupancy equals
// `occupancy` (intensity is 1/4); dilute enough to stay a valid process.
GridKernel dilute_sine4_kernel(int cells, double occupancy = 0.2);

// Self-adjoint table on unit cells, for determinant-level checks that do not
// need a valid process law.
GridKernel random_grid_kernel(CounterRng& rng, int cells, double scale = 0.5);

}  // namespace pfpp
