#include "pfpp/instances.hpp"

#include <Eigen/QR>

namespace pfpp {

Complex random_complex(CounterRng& rng, double scale) {
    return Complex(scale * rng.next_normal(), scale * rng.next_normal());
}

Quaternion random_quaternion(CounterRng& rng, double scale) {
    return Quaternion(random_complex(rng, scale), random_complex(rng, scale),
                      random_complex(rng, scale), random_complex(rng, scale));
}

QMatrix random_self_adjoint(CounterRng& rng, int n, double scale) {
    QMatrix m(n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = Quaternion(random_complex(rng, scale));
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = random_quaternion(rng, scale);
            m(j, i) = conj(m(i, j));
        }
    }
    m.declare_adjointness(Adjointness::SelfAdjoint);
    return m;
}

QMatrix random_almost_self_adjoint(CounterRng& rng, int n, int k, double scale) {
    QMatrix m = random_self_adjoint(rng, n, scale);
    for (int j = 0; j < n; ++j) {
        m(k, j) = random_quaternion(rng, scale);
        if (j != k) m(j, k) = random_quaternion(rng, scale);
    }
    m.declare_adjointness(Adjointness::AlmostSelfAdjoint, k);
    return m;
}

GridKernel random_projection_kernel(CounterRng& rng, int cells, int rank) {
    Eigen::MatrixXd g(cells, rank);
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = rng.next_normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cells, rank);
    Eigen::MatrixXd p = q * q.transpose();

    QMatrix table(cells);
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) table(i, j) = Quaternion(Complex(p(i, j), 0.0));
    table.declare_adjointness(Adjointness::SelfAdjoint);
    return GridKernel(GroundSet::uniform(0.0, cells, cells), table);
}

GridKernel dilute_sine4_kernel(int cells, double occupancy) {
    const double width = 4.0 * occupancy;
    return discretize(Sine4Kernel{}, GroundSet::uniform(0.0, width * cells, cells));
}

GridKernel random_grid_kernel(CounterRng& rng, int cells, double scale) {
    QMatrix table = random_self_adjoint(rng, cells, scale);
    return GridKernel(GroundSet::uniform(0.0, cells, cells), table);
}

}  // namespace pfpp
