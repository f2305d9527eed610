#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Core>

namespace pfpp {

using Complex = std::complex<double>;

// Quaternion with complex coefficients: q = q0 + q1*i + q2*j + q3*k where
// i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j, and the
// complex coefficients commute with the units. conj() negates the unit parts
// and leaves the complex coefficients untouched, so conj(pq) = conj(q)conj(p)
// but conj is NOT complex conjugation.
struct Quaternion {
    Complex q0{}, q1{}, q2{}, q3{};

    Quaternion() = default;
    Quaternion(double s) : q0(s) {}
    Quaternion(const Complex& s) : q0(s) {}
    Quaternion(Complex a, Complex b, Complex c, Complex d)
        : q0(std::move(a)), q1(std::move(b)), q2(std::move(c)), q3(std::move(d)) {}

    static Quaternion unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
    static Quaternion unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
    static Quaternion unit_k() { return {0.0, 0.0, 0.0, 1.0}; }

    Quaternion& operator+=(const Quaternion& r) {
        q0 += r.q0; q1 += r.q1; q2 += r.q2; q3 += r.q3;
        return *this;
    }
    Quaternion& operator-=(const Quaternion& r) {
        q0 -= r.q0; q1 -= r.q1; q2 -= r.q2; q3 -= r.q3;
        return *this;
    }
};

inline Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
inline Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
inline Quaternion operator-(const Quaternion& a) { return {-a.q0, -a.q1, -a.q2, -a.q3}; }

inline Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.q0 * q.q0 - p.q1 * q.q1 - p.q2 * q.q2 - p.q3 * q.q3,
            p.q0 * q.q1 + p.q1 * q.q0 + p.q2 * q.q3 - p.q3 * q.q2,
            p.q0 * q.q2 - p.q1 * q.q3 + p.q2 * q.q0 + p.q3 * q.q1,
            p.q0 * q.q3 + p.q1 * q.q2 - p.q2 * q.q1 + p.q3 * q.q0};
}

inline Quaternion operator*(const Complex& c, const Quaternion& q) {
    return {c * q.q0, c * q.q1, c * q.q2, c * q.q3};
}
inline Quaternion operator*(const Quaternion& q, const Complex& c) { return c * q; }
inline Quaternion operator*(double c, const Quaternion& q) { return Complex(c) * q; }
inline Quaternion operator*(const Quaternion& q, double c) { return Complex(c) * q; }

inline Quaternion conj(const Quaternion& q) { return {q.q0, -q.q1, -q.q2, -q.q3}; }

// Hermitian inner product of the coefficient vectors in C^4.
inline Complex inner(const Quaternion& p, const Quaternion& q) {
    return p.q0 * std::conj(q.q0) + p.q1 * std::conj(q.q1) +
           p.q2 * std::conj(q.q2) + p.q3 * std::conj(q.q3);
}

// q * conj(q) = conj(q) * q = q0^2 + q1^2 + q2^2 + q3^2 (complex squares).
inline Complex scalar_square(const Quaternion& q) {
    return q.q0 * q.q0 + q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3;
}

inline double max_abs(const Quaternion& q) {
    return std::max(std::max(std::abs(q.q0), std::abs(q.q1)),
                    std::max(std::abs(q.q2), std::abs(q.q3)));
}

// A quaternion counts as scalar when its unit parts vanish relative to its
// largest coefficient (with an absolute floor for near-zero quaternions).
inline bool is_scalar(const Quaternion& q, double rel_tol = 1e-10, double abs_tol = 1e-12) {
    const double vec = std::max(std::abs(q.q1), std::max(std::abs(q.q2), std::abs(q.q3)));
    return vec <= std::max(abs_tol, rel_tol * max_abs(q));
}

inline double vector_defect(const Quaternion& q) {
    return std::max(std::abs(q.q1), std::max(std::abs(q.q2), std::abs(q.q3)));
}

inline bool approx_equal(const Quaternion& a, const Quaternion& b, double tol) {
    return max_abs(a - b) <= tol;
}

// 2x2 complex image: q -> [[q0 + i q3, i q1 - q2], [i q1 + q2, q0 - i q3]].
// Algebra isomorphism onto all of M_2(C); det of the image is scalar_square(q).
inline Eigen::Matrix2cd mat2(const Quaternion& q) {
    const Complex im(0.0, 1.0);
    Eigen::Matrix2cd m;
    m << q.q0 + im * q.q3, im * q.q1 - q.q2,
         im * q.q1 + q.q2, q.q0 - im * q.q3;
    return m;
}

inline Quaternion from_mat2(const Eigen::Matrix2cd& m) {
    const Complex half_i(0.0, -0.5);  // -i/2
    return {0.5 * (m(0, 0) + m(1, 1)),
            half_i * (m(0, 1) + m(1, 0)),
            0.5 * (m(1, 0) - m(0, 1)),
            half_i * (m(0, 0) - m(1, 1))};
}

// Image of quaternion conjugation on 2x2 blocks: [[x,y],[z,w]] -> [[w,-y],[-z,x]].
inline Eigen::Matrix2cd dagger2(const Eigen::Matrix2cd& m) {
    Eigen::Matrix2cd d;
    d << m(1, 1), -m(0, 1),
         -m(1, 0), m(0, 0);
    return d;
}

}  // namespace pfpp
