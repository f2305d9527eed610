#include <doctest.h>

#include <pfpp/instances.hpp>
#include <pfpp/quaternion.hpp>
#include <pfpp/rng.hpp>

using namespace pfpp;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("unit multiplication table") {
    const Quaternion i = Quaternion::unit_i();
    const Quaternion j = Quaternion::unit_j();
    const Quaternion k = Quaternion::unit_k();
    CHECK(max_abs(i * i - Quaternion(-1.0)) == 0.0);
    CHECK(max_abs(j * j - Quaternion(-1.0)) == 0.0);
    CHECK(max_abs(k * k - Quaternion(-1.0)) == 0.0);
    CHECK(max_abs(i * j - k) == 0.0);
    CHECK(max_abs(j * k - i) == 0.0);
    CHECK(max_abs(k * i - j) == 0.0);
    CHECK(max_abs(i * j + j * i) == 0.0);
    CHECK(max_abs(j * k + k * j) == 0.0);
    CHECK(max_abs(k * i + i * k) == 0.0);
}

TEST_CASE("frozen products") {
    const Quaternion i = Quaternion::unit_i();
    const Quaternion j = Quaternion::unit_j();
    const Quaternion one(1.0);
    // (1 + i)(1 + j) = 1 + i + j + k; reversing the factors flips the k part.
    const Quaternion p = (one + i) * (one + j);
    CHECK(max_abs(p - Quaternion{1.0, 1.0, 1.0, 1.0}) == 0.0);
    const Quaternion q = (one + j) * (one + i);
    CHECK(max_abs(q - Quaternion{1.0, 1.0, 1.0, -1.0}) == 0.0);
}

TEST_CASE("complex coefficients commute with units") {
    CounterRng rng(11, 0);
    const Quaternion p = random_quaternion(rng);
    const Quaternion q = random_quaternion(rng);
    const Complex c = random_complex(rng);
    CHECK(max_abs((c * p) * q - c * (p * q)) < 1e-14);
    CHECK(max_abs(p * (c * q) - c * (p * q)) < 1e-14);
    CHECK(max_abs(p * c - c * p) == 0.0);
}

TEST_CASE("conj is an anti-homomorphism fixing complex scalars") {
    CounterRng rng(12, 0);
    for (int t = 0; t < 20; ++t) {
        const Quaternion p = random_quaternion(rng);
        const Quaternion q = random_quaternion(rng);
        CHECK(max_abs(conj(p * q) - conj(q) * conj(p)) < 1e-13);
    }
    const Quaternion s(Complex(2.0, -3.0));
    CHECK(max_abs(conj(s) - s) == 0.0);  // conj is not complex conjugation
}

TEST_CASE("inner product and scalar square") {
    const Quaternion z{1.0, kI, 0.0, 0.0};  // 1 + (sqrt(-1)) i
    CHECK(std::abs(inner(z, z) - Complex(2.0)) == 0.0);
    // scalar_square uses complex squares, so z is a zero divisor:
    CHECK(std::abs(scalar_square(z)) == 0.0);
    CHECK(max_abs(z * conj(z)) == 0.0);

    CounterRng rng(13, 0);
    for (int t = 0; t < 20; ++t) {
        const Quaternion p = random_quaternion(rng);
        const Quaternion q = random_quaternion(rng);
        // Hermitian symmetry of the coefficient inner product.
        CHECK(std::abs(inner(p, q) - std::conj(inner(q, p))) < 1e-14);
        // q conj(q) = conj(q) q = scalar_square(q) as a scalar quaternion.
        const Quaternion l = p * conj(p);
        const Quaternion r = conj(p) * p;
        CHECK(vector_defect(l) < 1e-14);
        CHECK(vector_defect(r) < 1e-14);
        CHECK(std::abs(l.q0 - scalar_square(p)) < 1e-14);
        CHECK(std::abs(r.q0 - scalar_square(p)) < 1e-14);
    }
}

TEST_CASE("2x2 complex embedding") {
    CounterRng rng(14, 0);
    for (int t = 0; t < 20; ++t) {
        const Quaternion p = random_quaternion(rng);
        const Quaternion q = random_quaternion(rng);
        // Algebra homomorphism.
        CHECK((mat2(p * q) - mat2(p) * mat2(q)).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((mat2(p + q) - (mat2(p) + mat2(q))).cwiseAbs().maxCoeff() < 1e-14);
        // Determinant of the image is the scalar square.
        CHECK(std::abs(mat2(p).determinant() - scalar_square(p)) < 1e-13);
        // Conjugation corresponds to the adjugate-style block flip.
        CHECK((mat2(conj(p)) - dagger2(mat2(p))).cwiseAbs().maxCoeff() < 1e-14);
        // Round trip.
        CHECK(max_abs(from_mat2(mat2(p)) - p) < 1e-14);
    }
    // Scalars embed as multiples of the identity.
    const Complex c(0.7, -0.2);
    CHECK((mat2(Quaternion(c)) - c * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("scalar classification") {
    CHECK(is_scalar(Quaternion(Complex(3.0, 1.0))));
    CHECK(is_scalar(Quaternion{1.0, 1e-14, 0.0, 0.0}));
    CHECK_FALSE(is_scalar(Quaternion{1.0, 1e-3, 0.0, 0.0}));
    CHECK(vector_defect(Quaternion{5.0, 0.25, 0.0, -1.0}) == 1.0);
    CHECK(max_abs(Quaternion{Complex(0, 2), 1.0, 0.0, 0.0}) == 2.0);
}
