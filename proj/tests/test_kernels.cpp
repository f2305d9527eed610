#include <doctest.h>

#include <Eigen/Dense>
#include <pfpp/errors.hpp>
#include <pfpp/instances.hpp>
#include <pfpp/kernels.hpp>
#include <pfpp/rng.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace pfpp;

namespace {
constexpr double kPi = std::numbers::pi;

// Composite-Simpson oracle for the antiderivative of sin(pi t)/(pi t).
double simpson_sinc(double x, int panels) {
    auto f = [](double t) { return t == 0.0 ? 1.0 : std::sin(kPi * t) / (kPi * t); };
    const double h = x / (2 * panels);
    double sum = f(0.0) + f(x);
    for (int i = 1; i < 2 * panels; ++i) sum += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}
}  // namespace

TEST_CASE("ground set validation") {
    CHECK_NOTHROW(GroundSet({0.0, 1.0, 2.5}, {1.0, 1.0, 0.5}).validate());
    CHECK_THROWS_AS(GroundSet({{0.0, 1.0}, {1.0}}).validate(), SchemaError);
    CHECK_THROWS_AS(GroundSet({{1.0, 1.0}, {1.0, 1.0}}).validate(), SchemaError);
    CHECK_THROWS_AS(GroundSet({{0.0, 1.0}, {1.0, 0.0}}).validate(), SchemaError);

    const GroundSet u = GroundSet::uniform(0.0, 2.0, 4);
    REQUIRE(u.size() == 4);
    CHECK(u.weights[0] == 0.5);
    CHECK(u.points[1] - u.points[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(GroundSet::uniform(1.0, 0.0, 4), SchemaError);

    const GroundSet r = u.restrict_to({1, 3});
    REQUIRE(r.size() == 2);
    CHECK(r.points[0] == u.points[1]);
    CHECK(r.points[1] == u.points[3]);
}

TEST_CASE("circular kernel structure") {
    CHECK_THROWS_AS(CseKernel(0), SchemaError);
    const CseKernel k(6);
    CHECK(k.mean_density() == doctest::Approx(3.0 / kPi).epsilon(1e-12));

    // Half-integer frequencies make the kernel anti-periodic with period 2 pi.
    for (double th : {0.3, -1.7, 2.9}) {
        CHECK(max_abs(k.eval_sum(th + 2.0 * kPi) + k.eval_sum(th)) < 1e-12);
        // Sum and closed forms are independent evaluation routes.
        CHECK(max_abs(k.eval_sum(th) - k.eval_closed(th)) < 1e-12);
        // Reflection acts as quaternion conjugation.
        CHECK(max_abs(k.eval_sum(-th) - conj(k.eval_sum(th))) < 1e-13);
    }
    // Coincident-point value is the scalar mean density.
    const Quaternion d = k.eval_sum(0.0);
    CHECK(vector_defect(d) < 1e-14);
    CHECK(std::abs(d.q0 - Complex(k.mean_density())) < 1e-13);

    // Intensity k-point values stay real and translation invariant.
    const std::vector<double> pts{-0.8, 0.1, 0.6};
    const CorrelationResult c = correlation_full(k, pts);
    CHECK(c.imag_defect < 1e-12);
    std::vector<double> shifted = pts;
    for (double& x : shifted) x += 0.9;
    CHECK(correlation(k, shifted) == doctest::Approx(c.value).epsilon(1e-9));
}

TEST_CASE("bulk kernel frozen values") {
    const Sine4Kernel k;
    // Coincident points: intensity exactly 1/4.
    CHECK(max_abs(k.eval(0.0) - Quaternion(Complex(0.25))) < 1e-15);

    // Components at separation 1 (scalar part 1/(2 pi)).
    const Quaternion q = k.eval(1.0);
    CHECK(q.q0.real() == doctest::Approx(0.15915494309189535).epsilon(1e-14));
    CHECK(q.q0.imag() == 0.0);
    CHECK(q.q1.real() == 0.0);
    CHECK(q.q1.imag() == doctest::Approx(-0.029504315886627677).epsilon(1e-12));
    CHECK(q.q2.real() == doctest::Approx(0.18865925897852298).epsilon(1e-13));
    CHECK(max_abs(k.eval(-1.0) - conj(q)) == 0.0);

    // Companion values at separation 1: the integral companion is the sinc
    // antiderivative at 1/2, the derivative companion is -1/pi.
    CHECK(sinc_pi_antiderivative(0.5) == doctest::Approx(0.43632714973030134).epsilon(1e-13));
    CHECK(0.25 * sinc_pi_derivative(0.5) == doctest::Approx(-1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("bulk kernel two-point law") {
    const Sine4Kernel k;
    // Strong short-range repulsion: tiny but nonnegative near coincidence.
    for (double r : {0.01, 0.05, 0.3, 0.72, 1.0, 2.0}) {
        const std::vector<double> pts{0.0, r};
        const double rho2 = correlation(k, pts);
        CHECK(rho2 >= -1e-12);
        CHECK(rho2 <= 0.0625 + 1e-3);  // never far above the independent value
    }
    // Decay toward independence, with the oscillatory envelope ~1/(16 d):
    // the cosine term peaks at integer separations and vanishes at
    // half-integers.
    const std::vector<double> far{0.0, 50.0};
    CHECK(std::abs(correlation(k, far) - 0.0625) < 3e-3);
    const std::vector<double> far_half{0.0, 50.5};
    CHECK(std::abs(correlation(k, far_half) - 0.0625) < 1e-3);

    // Translation invariance.
    const std::vector<double> a{0.0, 1.3}, b{-7.2, -5.9};
    CHECK(correlation(k, a) == doctest::Approx(correlation(k, b)).epsilon(1e-12));
}

TEST_CASE("sinc antiderivative: series, quadrature, and an independent oracle") {
    // The evaluation switches from power series to adaptive quadrature at
    // |x| = 1; both sides agree across the seam.
    CHECK(std::abs(sinc_pi_antiderivative(0.999999) - sinc_pi_antiderivative(1.000001)) <
          5e-12);
    // Simpson oracle away from the seam.
    CHECK(sinc_pi_antiderivative(3.7) ==
          doctest::Approx(simpson_sinc(3.7, 4000)).epsilon(1e-10));
    CHECK(sinc_pi_antiderivative(0.4) ==
          doctest::Approx(simpson_sinc(0.4, 2000)).epsilon(1e-10));
    // Odd symmetry.
    CHECK(sinc_pi_antiderivative(-3.7) == -sinc_pi_antiderivative(3.7));
}

TEST_CASE("scalar kernels reduce to ordinary determinants") {
    const auto k = make_scalar_sine_kernel();
    CounterRng rng(41, 0);
    std::vector<double> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(3.0 * rng.next_uniform());
    std::sort(pts.begin(), pts.end());
    Eigen::MatrixXcd m(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = (*k)(pts[i], pts[j]).q0;
    CHECK(correlation(*k, pts) == doctest::Approx(m.determinant().real()).epsilon(1e-10));
}

TEST_CASE("sample matrices require distinct points") {
    const Sine4Kernel k;
    const std::vector<double> dup{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(sample_matrix(k, dup), SchemaError);
}

TEST_CASE("grid discretization folds the cell weights") {
    const Sine4Kernel k;
    const GroundSet g{{0.0, 0.5, 1.25}, {0.5, 0.5, 1.0}};
    const GridKernel t = discretize(k, g);
    REQUIRE(t.size() == 3);
    // T_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j).
    const Quaternion expect01 = std::sqrt(0.5) * k(0.0, 0.5) * std::sqrt(0.5);
    CHECK(max_abs(t.table()(0, 1) - expect01) < 1e-14);
    CHECK(t.occupancy(2) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.trace() == doctest::Approx(0.25 * 2.0).epsilon(1e-12));

    // The trace approximates the expected point count over the covered span.
    const GridKernel fine = discretize(k, GroundSet::uniform(0.0, 8.0, 200));
    CHECK(std::abs(fine.trace() - 2.0) < 0.02);
}

TEST_CASE("grid kernel validation") {
    CounterRng rng(42, 0);
    QMatrix bad(2);
    bad(0, 1) = random_quaternion(rng);
    bad(1, 0) = random_quaternion(rng);
    CHECK_THROWS_AS(GridKernel(GroundSet::uniform(0, 1, 2), bad), DegeneracyError);
    CHECK_THROWS_AS(GridKernel(GroundSet::uniform(0, 1, 3), random_self_adjoint(rng, 2)),
                    SchemaError);
    // A defect beyond rel_tol is rejected whether or not symmetrize is set;
    // loosening the tolerance admits the table and symmetrize repairs it.
    QMatrix nearly = random_self_adjoint(rng, 2);
    nearly(0, 1).q0 += 1e-8;
    CHECK_THROWS_AS(GridKernel(GroundSet::uniform(0, 1, 2), nearly, true), DegeneracyError);
    const GridKernel repaired(GroundSet::uniform(0, 1, 2), nearly, true, 1e-6);
    CHECK(repaired.table().self_adjoint_defect() == 0.0);
}

TEST_CASE("grid correlations agree with analytic sample determinants") {
    const CseKernel k(4);
    const GroundSet g = GroundSet::uniform(-2.0, 2.0, 6);
    const GridKernel t = discretize(k, g);
    const std::vector<int> cells{1, 4};
    // Weight folding multiplies the qdet by the product of the cell weights.
    const std::vector<double> pts{g.points[1], g.points[4]};
    const double expect = correlation(k, pts) * g.weights[1] * g.weights[4];
    CHECK(grid_correlation(t, cells) == doctest::Approx(expect).epsilon(1e-11));

    CHECK_THROWS_AS(grid_correlation(t, std::vector<int>{0, 0}), SchemaError);
    CHECK_THROWS_AS(grid_correlation(t, std::vector<int>{6}), SchemaError);
}

TEST_CASE("batch evaluation: parallel equals serial") {
    const CseKernel k(5);
    CounterRng rng(43, 0);
    std::vector<std::vector<double>> tuples;
    for (int t = 0; t < 64; ++t) {
        std::vector<double> pts;
        const int m = 1 + static_cast<int>(rng.next_u64() % 3);
        for (int i = 0; i < m; ++i) pts.push_back(-3.0 + 6.0 * rng.next_uniform());
        std::sort(pts.begin(), pts.end());
        tuples.push_back(std::move(pts));
    }
    const std::vector<double> par = correlation_batch(k, tuples);
    const std::vector<double> ser = correlation_batch_serial(k, tuples);
    REQUIRE(par.size() == ser.size());
    for (size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
}
