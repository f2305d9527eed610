#include "pfpp/qmatrix.hpp"

#include <algorithm>
#include <numeric>

#include "pfpp/errors.hpp"

namespace pfpp {

QMatrix QMatrix::identity(int n) {
    QMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = Quaternion(1.0);
    m.declare_adjointness(Adjointness::SelfAdjoint);
    return m;
}

QMatrix QMatrix::dagger() const {
    QMatrix d(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) d(i, j) = conj((*this)(j, i));
    d.declare_adjointness(adj_, k_);
    return d;
}

double QMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& q : a_) m = std::max(m, pfpp::max_abs(q));
    return m;
}

double QMatrix::self_adjoint_defect() const {
    double d = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            d = std::max(d, pfpp::max_abs((*this)(i, j) - conj((*this)(j, i))));
    return d;
}

bool QMatrix::is_self_adjoint(double rel_tol) const {
    return self_adjoint_defect() <= rel_tol * std::max(1.0, max_abs());
}

std::optional<int> QMatrix::almost_self_adjoint_row(double rel_tol) const {
    if (is_self_adjoint(rel_tol)) return std::nullopt;
    const double tol = rel_tol * std::max(1.0, max_abs());
    for (int k = 0; k < n_; ++k) {
        double defect = 0.0;
        for (int i = 0; i < n_ && defect <= tol; ++i) {
            if (i == k) continue;
            for (int j = i; j < n_; ++j) {
                if (j == k) continue;
                defect = std::max(defect, pfpp::max_abs((*this)(i, j) - conj((*this)(j, i))));
                if (defect > tol) break;
            }
        }
        if (defect <= tol) return k;
    }
    return std::nullopt;
}

Adjointness QMatrix::classify(double rel_tol) const {
    if (is_self_adjoint(rel_tol)) return Adjointness::SelfAdjoint;
    if (almost_self_adjoint_row(rel_tol)) return Adjointness::AlmostSelfAdjoint;
    return Adjointness::General;
}

void QMatrix::symmetrize() {
    for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) {
            const Quaternion avg = 0.5 * ((*this)(i, j) + conj((*this)(j, i)));
            (*this)(i, j) = avg;
            (*this)(j, i) = conj(avg);
        }
    }
    adj_ = Adjointness::SelfAdjoint;
    k_ = -1;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    if (a.size() != b.size()) throw SchemaError("matrix size mismatch in +");
    QMatrix r(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    if (a.size() != b.size()) throw SchemaError("matrix size mismatch in -");
    QMatrix r(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.size() != b.size()) throw SchemaError("matrix size mismatch in *");
    const int n = a.size();
    QMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Quaternion& aik = a(i, k);
            for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

QMatrix submatrix(const QMatrix& M, const std::vector<int>& idx) {
    QMatrix s(static_cast<int>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) s(static_cast<int>(i), static_cast<int>(j)) = M(idx[i], idx[j]);
    return s;
}

QMatrix submatrix_mask(const QMatrix& M, uint32_t mask) {
    std::vector<int> idx;
    for (int i = 0; i < M.size(); ++i)
        if (mask & (1u << i)) idx.push_back(i);
    return submatrix(M, idx);
}

Eigen::MatrixXcd complex_lift(const QMatrix& M) {
    const int n = M.size();
    Eigen::MatrixXcd A(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A.block<2, 2>(2 * i, 2 * j) = mat2(M(i, j));
    return A;
}

QMatrix from_complex_lift(const Eigen::MatrixXcd& A) {
    if (A.rows() != A.cols() || A.rows() % 2 != 0)
        throw SchemaError("complex lift must be square with even dimension");
    const int n = static_cast<int>(A.rows()) / 2;
    QMatrix M(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = from_mat2(A.block<2, 2>(2 * i, 2 * j));
    return M;
}

Eigen::MatrixXcd symplectic_form(int n) {
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        y(2 * i, 2 * i + 1) = -1.0;
        y(2 * i + 1, 2 * i) = 1.0;
    }
    return y;
}

Eigen::MatrixXcd skew_embedding(const QMatrix& M, double rel_tol) {
    if (!M.is_self_adjoint(rel_tol))
        throw DegeneracyError("skew embedding requires a self-adjoint matrix (defect " +
                              std::to_string(M.self_adjoint_defect()) + ")");
    const Eigen::MatrixXcd A = complex_lift(M);
    const int n2 = static_cast<int>(A.rows());
    // -Y A: within each 2-row stripe, new row pair = (second row, -first row).
    Eigen::MatrixXcd S(n2, n2);
    for (int i = 0; i < n2 / 2; ++i) {
        S.row(2 * i) = A.row(2 * i + 1);
        S.row(2 * i + 1) = -A.row(2 * i);
    }
    return S;
}

Complex pfaffian(Eigen::MatrixXcd A, double skew_tol) {
    const auto n = A.rows();
    if (A.cols() != n) throw SchemaError("pfaffian requires a square matrix");
    if (n % 2 != 0) throw SchemaError("pfaffian requires even dimension");
    if (n == 0) return Complex(1.0);

    const double scale = A.cwiseAbs().maxCoeff();
    if (scale == 0.0) return Complex(0.0);
    const double defect = (A + A.transpose()).cwiseAbs().maxCoeff();
    if (defect > skew_tol * scale)
        throw SchemaError("pfaffian input is not skew-symmetric (defect " +
                          std::to_string(defect / scale) + " relative)");

    Complex pf(1.0);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        // Largest-magnitude pivot in column k below the diagonal; first index
        // wins ties so the reduction is deterministic.
        Eigen::Index piv = k + 1;
        double best = std::abs(A(k + 1, k));
        for (Eigen::Index i = k + 2; i < n; ++i) {
            const double v = std::abs(A(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) return Complex(0.0);
        if (piv != k + 1) {
            A.row(k + 1).swap(A.row(piv));
            A.col(k + 1).swap(A.col(piv));
            pf = -pf;
        }
        const Complex e = A(k, k + 1);
        pf *= e;
        if (k + 2 >= n) break;
        // Rank-two Gauss update of the trailing block; preserves skewness.
        const auto m = n - (k + 2);
        Eigen::VectorXcd tau = A.row(k).segment(k + 2, m) / e;
        Eigen::VectorXcd col = A.col(k + 1).segment(k + 2, m);
        A.bottomRightCorner(m, m).noalias() += tau * col.transpose();
        A.bottomRightCorner(m, m).noalias() -= col * tau.transpose();
    }
    return pf;
}

Complex qdet(const QMatrix& M) {
    if (M.size() == 0) return Complex(1.0);
    return pfaffian(skew_embedding(M));
}

namespace {

// One Dyson step on an explicit buffer. mat is n x n row-major; k is the
// expansion row. Minors for column l carry exceptional row (l < k ? l : l-1);
// the principal minor (l == k) is self-adjoint and expands along its last row.
Quaternion qdet_rec(const std::vector<Quaternion>& mat, int n, int k) {
    if (n == 0) return Quaternion(1.0);
    if (n == 1) return mat[0];
    Quaternion sum;
    std::vector<Quaternion> minor(static_cast<size_t>(n - 1) * (n - 1));
    for (int l = 0; l < n; ++l) {
        int ii = 0;
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            int jj = 0;
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                minor[static_cast<size_t>(ii) * (n - 1) + jj] =
                    (j == l) ? mat[static_cast<size_t>(i) * n + k]
                             : mat[static_cast<size_t>(i) * n + j];
                ++jj;
            }
            ++ii;
        }
        const int next_k = (l == k) ? (n - 2) : (l < k ? l : l - 1);
        const Quaternion term = mat[static_cast<size_t>(k) * n + l] * qdet_rec(minor, n - 1, next_k);
        if (l == k)
            sum += term;
        else
            sum -= term;
    }
    return sum;
}

}  // namespace

Quaternion qdet_recursive(const QMatrix& M, std::optional<int> expand_row, int size_cap) {
    const int n = M.size();
    if (n > size_cap)
        throw SchemaError("qdet_recursive: size " + std::to_string(n) + " exceeds cap " +
                          std::to_string(size_cap));
    if (n == 0) return Quaternion(1.0);

    int k;
    if (M.is_self_adjoint()) {
        k = expand_row.value_or(n - 1);
        if (k < 0 || k >= n) throw SchemaError("qdet_recursive: expansion row out of range");
    } else {
        const auto kk = M.almost_self_adjoint_row();
        if (!kk)
            throw DegeneracyError("qdet_recursive requires a self-adjoint or almost-self-adjoint matrix");
        k = *kk;
        if (expand_row && *expand_row != k)
            throw SchemaError("qdet_recursive: expansion row must be the exceptional row " +
                              std::to_string(k));
    }

    std::vector<Quaternion> buf(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) buf[static_cast<size_t>(i) * n + j] = M(i, j);
    return qdet_rec(buf, n, k);
}

Complex qdet_moore(const QMatrix& M) {
    const int n = M.size();
    if (n > 6) throw SchemaError("qdet_moore: size exceeds 6");
    if (n == 0) return Complex(1.0);
    if (!M.is_self_adjoint())
        throw DegeneracyError("qdet_moore requires a self-adjoint matrix");

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Quaternion total;
    std::vector<bool> seen(n);
    do {
        std::fill(seen.begin(), seen.end(), false);
        // Cycles anchored at their largest element, largest anchors first:
        // scanning anchors n-1 .. 0 visits each cycle at its maximum.
        Quaternion prod(1.0);
        int cycles = 0;
        for (int a = n - 1; a >= 0; --a) {
            if (seen[a]) continue;
            ++cycles;
            seen[a] = true;
            int prev = a;
            for (int cur = perm[a]; cur != a; cur = perm[cur]) {
                seen[cur] = true;
                prod = prod * M(prev, cur);
                prev = cur;
            }
            prod = prod * M(prev, a);
        }
        if ((n - cycles) % 2 == 0)
            total += prod;
        else
            total -= prod;
    } while (std::next_permutation(perm.begin(), perm.end()));

    return total.q0;
}

QMatrix qmat_inverse(const QMatrix& M, double rel_tol) {
    const int n = M.size();
    if (n == 0) return M;
    const Eigen::MatrixXcd A = complex_lift(M);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > rel_tol * smax))
        throw DegeneracyError("matrix is singular to working precision (sigma_min/sigma_max = " +
                              std::to_string(smax > 0 ? smin / smax : 0.0) + ")");
    return from_complex_lift(A.partialPivLu().solve(
        Eigen::MatrixXcd::Identity(2 * n, 2 * n)));
}

QMatrix apply_elementary(const QMatrix& M, const ElementaryOp& op) {
    const int n = M.size();
    QMatrix r = M;
    if (std::holds_alternative<SwapOp>(op)) {
        const auto [i, j] = std::get<SwapOp>(op);
        if (i < 0 || j < 0 || i >= n || j >= n) throw SchemaError("swap index out of range");
        if (i == j) return r;
        for (int a = 0; a < n; ++a) std::swap(r(a, i), r(a, j));
        for (int a = 0; a < n; ++a) std::swap(r(i, a), r(j, a));
        return r;
    }
    if (std::holds_alternative<ScaleOp>(op)) {
        const auto& [i, q] = std::get<ScaleOp>(op);
        if (i < 0 || i >= n) throw SchemaError("scale index out of range");
        for (int a = 0; a < n; ++a) r(a, i) = r(a, i) * q;
        const Quaternion qc = conj(q);
        for (int a = 0; a < n; ++a) r(i, a) = qc * r(i, a);
        return r;
    }
    const auto& [from, to, q] = std::get<AddMultipleOp>(op);
    if (from < 0 || to < 0 || from >= n || to >= n)
        throw SchemaError("add-multiple index out of range");
    if (from == to) throw SchemaError("add-multiple requires distinct slots");
    for (int a = 0; a < n; ++a) r(a, to) += r(a, from) * q;
    const Quaternion qc = conj(q);
    for (int a = 0; a < n; ++a) r(to, a) += qc * r(from, a);
    return r;
}

}  // namespace pfpp
