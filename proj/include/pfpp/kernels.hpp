#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "pfpp/qmatrix.hpp"

namespace pfpp {

// Finite ground set: strictly increasing points with positive cell weights.
struct GroundSet {
    std::vector<double> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
    void validate() const;  // throws SchemaError

    static GroundSet uniform(double a, double b, int cells);
    GroundSet restrict_to(const std::vector<int>& idx) const;
};

// Translation-covariant or general two-point kernel with quaternion values.
class Kernel {
public:
    virtual ~Kernel() = default;
    virtual Quaternion operator()(double x, double y) const = 0;
};

// Circular ensemble kernel on (-pi, pi]: a Fourier sum over half-integer
// frequencies p = 1/2, 3/2, ..., n - 1/2 with quaternion-valued coefficients.
// Two independent evaluation routes are exposed; operator() uses the sum form.
class CseKernel : public Kernel {
public:
    explicit CseKernel(int n);
    Quaternion operator()(double x, double y) const override { return eval_sum(x - y); }
    Quaternion eval_sum(double theta) const;
    Quaternion eval_closed(double theta) const;
    int order() const { return n_; }
    // First intensity: value at coincident points.
    double mean_density() const;

private:
    int n_;
};

// Bulk scaling limit kernel on the real line at first intensity 1/4, built
// from s(x) = sin(pi x/2)/(pi x/2) with integral and derivative companions
// Is(x) = (1/2) int_0^x s, Ds(x) = (1/2) s'(x). The half-argument and the
// 1/2 factors come from the density-1/4 rescaling; dropping them drives the
// two-point function negative (min -0.13 near separation 0.72).
class Sine4Kernel : public Kernel {
public:
    Quaternion operator()(double x, double y) const override { return eval(x - y); }
    Quaternion eval(double x) const;
};

// sinc, its antiderivative from 0, and its derivative. Is uses a power series
// for |x| < 1 and adaptive Gauss-Kronrod quadrature beyond (abs error 1e-12).
double sinc_pi(double x);
double sinc_pi_antiderivative(double x);
double sinc_pi_derivative(double x);

// Scalar symmetric kernel: f(x, y) = f(y, x) complex-valued, embedded as
// scalar quaternions. Symmetry is the caller's contract; sample matrices are
// validated downstream.
class ScalarKernel : public Kernel {
public:
    using Fn = std::function<Complex(double, double)>;
    explicit ScalarKernel(Fn f) : f_(std::move(f)) {}
    Quaternion operator()(double x, double y) const override { return Quaternion(f_(x, y)); }

private:
    Fn f_;
};

// Scalar sine kernel sin(pi(x-y))/(pi(x-y)); the standard scalar projection
// benchmark, useful for determinant-reduction checks.
std::shared_ptr<const Kernel> make_scalar_sine_kernel();

// Kernel restricted to a finite ground set with the cell weights folded in
// symmetrically: T_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j). Diagonal scalar
// parts are per-cell occupancies.
class GridKernel {
public:
    GridKernel() = default;
    GridKernel(GroundSet ground, QMatrix table, bool symmetrize = false,
               double rel_tol = 1e-10);

    const GroundSet& ground() const { return ground_; }
    const QMatrix& table() const { return table_; }
    int size() const { return table_.size(); }
    double occupancy(int cell) const { return table_(cell, cell).q0.real(); }
    double trace() const;

private:
    GroundSet ground_;
    QMatrix table_;
};

GridKernel discretize(const Kernel& k, const GroundSet& g);

// Sample matrix M_ij = K(x_i, x_j) at pairwise distinct points.
QMatrix sample_matrix(const Kernel& k, std::span<const double> points);

struct CorrelationResult {
    double value;        // scalar real part of the sample qdet
    double imag_defect;  // |imaginary part|
};

CorrelationResult correlation_full(const Kernel& k, std::span<const double> points);
double correlation(const Kernel& k, std::span<const double> points);

// qdet of the weighted table restricted to a cell subset: the correlation of
// the discretized process at those cells.
double grid_correlation(const GridKernel& k, std::span<const int> cells);

// Batch evaluation over many tuples; the production path is OpenMP-parallel,
// the serial variant is the reference kept for testing.
std::vector<double> correlation_batch(const Kernel& k,
                                      const std::vector<std::vector<double>>& tuples);
std::vector<double> correlation_batch_serial(const Kernel& k,
                                             const std::vector<std::vector<double>>& tuples);

}  // namespace pfpp
