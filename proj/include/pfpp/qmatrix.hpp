#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pfpp/quaternion.hpp"

namespace pfpp {

enum class Adjointness { SelfAdjoint, AlmostSelfAdjoint, General };

// Dense square matrix over the complexified quaternions, stored row-major.
// Adjointness metadata is carried for serialization and dispatch; determinant
// routines re-verify it against the entries at call time.
class QMatrix {
public:
    QMatrix() = default;
    explicit QMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

    static QMatrix identity(int n);

    int size() const { return n_; }

    Quaternion& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const Quaternion& operator()(int i, int j) const {
        return a_[static_cast<size_t>(i) * n_ + j];
    }

    // Conjugate transpose: (M^dag)_ij = conj(M_ji).
    QMatrix dagger() const;

    double max_abs() const;

    // Largest |M_ij - conj(M_ji)| over all entries (covers the diagonal:
    // a diagonal entry equal to its own conjugate must be scalar).
    double self_adjoint_defect() const;
    bool is_self_adjoint(double rel_tol = 1e-10) const;

    // Row k such that striking row and column k leaves a self-adjoint matrix.
    // Self-adjoint matrices return nullopt (every k qualifies); the smallest
    // valid k is reported otherwise.
    std::optional<int> almost_self_adjoint_row(double rel_tol = 1e-10) const;

    Adjointness classify(double rel_tol = 1e-10) const;

    // Replace M by (M + M^dag)/2.
    void symmetrize();

    Adjointness declared_adjointness() const { return adj_; }
    int declared_exceptional_row() const { return k_; }
    void declare_adjointness(Adjointness a, int exceptional_row = -1) {
        adj_ = a;
        k_ = exceptional_row;
    }

private:
    int n_ = 0;
    std::vector<Quaternion> a_;
    Adjointness adj_ = Adjointness::General;
    int k_ = -1;
};

QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator*(const QMatrix& a, const QMatrix& b);

QMatrix submatrix(const QMatrix& M, const std::vector<int>& idx);
QMatrix submatrix_mask(const QMatrix& M, uint32_t mask);

// Entrywise 2x2 complex embedding, a 2n x 2n matrix. Algebra homomorphism:
// lift(MN) = lift(M) lift(N), lift(M^dag) = Y lift(M)^T Y^{-1}.
Eigen::MatrixXcd complex_lift(const QMatrix& M);
QMatrix from_complex_lift(const Eigen::MatrixXcd& A);

// Block diagonal of n copies of the j-unit image [[0,-1],[1,0]].
Eigen::MatrixXcd symplectic_form(int n);

// psi(M) = -Y_n lift(M); skew-symmetric exactly when M is self-adjoint.
Eigen::MatrixXcd skew_embedding(const QMatrix& M, double rel_tol = 1e-10);

// Pfaffian of a complex skew-symmetric matrix via Parlett-Reid
// tridiagonalization with partial pivoting. pf [[0,1],[-1,0]] = +1.
// Rejects odd dimension; validates skewness relative to the largest entry.
Complex pfaffian(Eigen::MatrixXcd A, double skew_tol = 1e-10);

// Quaternion determinant of a self-adjoint matrix: pf(psi(M)). This is the
// production route; it satisfies qdet(M)^2 = det(lift(M)).
Complex qdet(const QMatrix& M);

// Dyson expansion along a row: sum over columns l of eps_kl M(k,l) times the
// determinant of the minor whose column l is replaced by column k before row
// and column k are struck (eps_kk = +1, else -1). For self-adjoint input any
// row may be chosen (default: last); almost-self-adjoint input must expand
// along its exceptional row. Factorial cost; sizes above size_cap rejected.
Quaternion qdet_recursive(const QMatrix& M,
                          std::optional<int> expand_row = std::nullopt,
                          int size_cap = 8);

// Moore's combinatorial sum over permutations: each cycle is written starting
// from its largest element, cycles are multiplied in order of decreasing
// largest element, and the permutation sign is applied. Self-adjoint input,
// n <= 6.
Complex qdet_moore(const QMatrix& M);

// Inverse through the complex lift, mapped back blockwise. Throws
// DegeneracyError when the smallest singular value of the lift is below
// rel_tol times the largest.
QMatrix qmat_inverse(const QMatrix& M, double rel_tol = 1e-12);

// Self-adjointness-preserving congruence operations.
struct SwapOp { int i, j; };                    // exchange slots i and j
struct ScaleOp { int i; Quaternion q; };        // col i -> col i q, row i -> conj(q) row i
struct AddMultipleOp { int from, to; Quaternion q; };  // col to += col from q, row to += conj(q) row from
using ElementaryOp = std::variant<SwapOp, ScaleOp, AddMultipleOp>;

QMatrix apply_elementary(const QMatrix& M, const ElementaryOp& op);

}  // namespace pfpp
