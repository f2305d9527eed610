#include "pfpp/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfpp/errors.hpp"

namespace pfpp {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void GroundSet::validate() const {
    if (points.size() != weights.size())
        throw SchemaError("ground set points and weights differ in length");
    for (size_t i = 0; i + 1 < points.size(); ++i)
        if (!(points[i] < points[i + 1]))
            throw SchemaError("ground set points must be strictly increasing");
    for (double w : weights)
        if (!(w > 0.0)) throw SchemaError("ground set weights must be positive");
}

GroundSet GroundSet::uniform(double a, double b, int cells) {
    if (cells <= 0 || !(b > a)) throw SchemaError("uniform ground set needs cells > 0 and b > a");
    GroundSet g;
    const double h = (b - a) / cells;
    for (int i = 0; i < cells; ++i) {
        g.points.push_back(a + (i + 0.5) * h);
        g.weights.push_back(h);
    }
    return g;
}

GroundSet GroundSet::restrict_to(const std::vector<int>& idx) const {
    GroundSet g;
    for (int i : idx) {
        g.points.push_back(points[i]);
        g.weights.push_back(weights[i]);
    }
    return g;
}

CseKernel::CseKernel(int n) : n_(n) {
    if (n < 1) throw SchemaError("circular kernel order must be >= 1");
}

double CseKernel::mean_density() const { return n_ / (2.0 * kPi); }

Quaternion CseKernel::eval_sum(double theta) const {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    for (int m = 0; m < n_; ++m) {
        const double p = m + 0.5;
        const double cp = std::cos(p * theta);
        const double sp = std::sin(p * theta);
        c0 += cp;
        c1 += (p * p - 1.0) / (2.0 * p) * sp;
        c2 += (p * p + 1.0) / (2.0 * p) * sp;
    }
    const double f = 1.0 / (2.0 * kPi);
    return {Complex(f * c0), Complex(0.0, f * c1), Complex(f * c2), Complex(0.0)};
}

Quaternion CseKernel::eval_closed(double theta) const {
    // Scalar part from the Dirichlet-style ratio; integral and derivative
    // parts summed termwise (exact antiderivatives/derivatives of the modes).
    const double den = std::sin(0.5 * theta);
    double s;
    if (std::abs(den) < 1e-8) {
        double c0 = 0.0;
        for (int m = 0; m < n_; ++m) c0 += std::cos((m + 0.5) * theta);
        s = c0 / kPi;
    } else {
        s = std::sin(n_ * theta) / den / (2.0 * kPi);
    }
    double is = 0.0, ds = 0.0;
    for (int m = 0; m < n_; ++m) {
        const double p = m + 0.5;
        const double sp = std::sin(p * theta);
        is += sp / p;
        ds += p * sp;
    }
    is /= kPi;
    ds /= -kPi;
    return {Complex(0.5 * s), Complex(0.0, -0.25 * (is + ds)), Complex(0.25 * (is - ds)),
            Complex(0.0)};
}

double sinc_pi(double x) {
    const double z = kPi * x;
    if (std::abs(z) < 1e-2) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0));
    }
    return std::sin(z) / z;
}

double sinc_pi_derivative(double x) {
    if (std::abs(x) < 5e-2) {
        const double p2 = kPi * kPi;
        const double x2 = x * x;
        // d/dx of the sinc series: -pi^2 x/3 + pi^4 x^3/30 - pi^6 x^5/840 + ...
        return x * p2 * (-1.0 / 3.0 + x2 * p2 * (1.0 / 30.0 - x2 * p2 / 840.0));
    }
    return std::cos(kPi * x) / x - std::sin(kPi * x) / (kPi * x * x);
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; symmetric).
const double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                        0.741531185599394, 0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.000000000000000};
const double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                        0.140653259715525, 0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

struct GkEstimate {
    double kronrod;
    double err;
};

template <typename F>
GkEstimate gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double lo = f(c - h * kXgk[i]);
        const double hi = f(c + h * kXgk[i]);
        kron += kWgk[i] * (lo + hi);
        if (i % 2 == 1) gauss += kWg[i / 2] * (lo + hi);
    }
    return {kron * h, std::abs(kron - gauss) * std::abs(h)};
}

// Adaptive bisection to absolute tolerance; the integrand here is smooth so a
// shallow stack suffices.
template <typename F>
double adaptive_gk(const F& f, double a, double b, double abs_tol) {
    struct Seg { double a, b, tol; int depth; };
    std::vector<Seg> stack;
    double total = 0.0;
    // Unit-length seed panels resolve the oscillation before adapting.
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a))));
    for (int i = 0; i < panels; ++i)
        stack.push_back({a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels,
                         abs_tol / panels, 0});
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        const GkEstimate e = gk15(f, s.a, s.b);
        if (e.err <= s.tol || s.depth >= 50) {
            total += e.kronrod;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        stack.push_back({s.a, m, 0.5 * s.tol, s.depth + 1});
        stack.push_back({m, s.b, 0.5 * s.tol, s.depth + 1});
    }
    return total;
}

}  // namespace

double sinc_pi_antiderivative(double x) {
    const double ax = std::abs(x);
    double r;
    if (ax < 1.0) {
        // x * sum_k (-1)^k (pi x)^{2k} / ((2k+1)(2k+1)!)
        const double z2 = kPi * x * kPi * x;
        double term = 1.0;  // (pi x)^{2k}/(2k+1)! at k = 0
        double sum = 1.0;
        for (int k = 1; k <= 40; ++k) {
            term *= -z2 / ((2.0 * k) * (2.0 * k + 1.0));
            const double add = term / (2.0 * k + 1.0);
            sum += add;
            if (std::abs(add) < 1e-17) break;
        }
        return x * sum;
    }
    r = adaptive_gk([](double t) { return sinc_pi(t); }, 0.0, ax, 1e-12);
    return x < 0 ? -r : r;
}

Quaternion Sine4Kernel::eval(double x) const {
    // Density-1/4 normalization: all three components take the half argument,
    // and Is, Ds carry a further 1/2 each relative to the raw antiderivative
    // and derivative of s. Is(x) = (1/2) int_0^x s(t) dt telescopes to the
    // antiderivative of sinc at x/2; Ds(x) = (1/2) s'(x) picks up another 1/2
    // from the chain rule.
    const double h = 0.5 * x;
    const double s = sinc_pi(h);
    const double is = sinc_pi_antiderivative(h);
    const double ds = 0.25 * sinc_pi_derivative(h);
    return {Complex(0.25 * s), Complex(0.0, -0.25 * (is + ds)), Complex(0.25 * (is - ds)),
            Complex(0.0)};
}

std::shared_ptr<const Kernel> make_scalar_sine_kernel() {
    return std::make_shared<ScalarKernel>(
        [](double x, double y) { return Complex(sinc_pi(x - y)); });
}

GridKernel::GridKernel(GroundSet ground, QMatrix table, bool symmetrize, double rel_tol)
    : ground_(std::move(ground)), table_(std::move(table)) {
    ground_.validate();
    if (ground_.size() != table_.size())
        throw SchemaError("grid kernel table size does not match its ground set");
    if (!table_.is_self_adjoint(rel_tol))
        throw DegeneracyError("grid kernel table is not self-adjoint (defect " +
                              std::to_string(table_.self_adjoint_defect()) + ")");
    if (symmetrize) table_.symmetrize();
    table_.declare_adjointness(Adjointness::SelfAdjoint);
}

double GridKernel::trace() const {
    double t = 0.0;
    for (int i = 0; i < size(); ++i) t += occupancy(i);
    return t;
}

GridKernel discretize(const Kernel& k, const GroundSet& g) {
    g.validate();
    const int n = g.size();
    QMatrix t(n);
    for (int i = 0; i < n; ++i) {
        const double swi = std::sqrt(g.weights[i]);
        for (int j = 0; j < n; ++j) {
            const double swj = std::sqrt(g.weights[j]);
            t(i, j) = swi * swj * k(g.points[i], g.points[j]);
        }
    }
    return GridKernel(g, std::move(t), /*symmetrize=*/true);
}

QMatrix sample_matrix(const Kernel& k, std::span<const double> points) {
    const int n = static_cast<int>(points.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (points[i] == points[j])
                throw SchemaError("sample points must be pairwise distinct");
    QMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = k(points[i], points[j]);
    return m;
}

CorrelationResult correlation_full(const Kernel& k, std::span<const double> points) {
    QMatrix m = sample_matrix(k, points);
    m.symmetrize();  // kernel self-adjointness holds to rounding; make it exact
    const Complex v = qdet(m);
    return {v.real(), std::abs(v.imag())};
}

double correlation(const Kernel& k, std::span<const double> points) {
    return correlation_full(k, points).value;
}

double grid_correlation(const GridKernel& k, std::span<const int> cells) {
    std::vector<int> idx(cells.begin(), cells.end());
    for (int c : idx)
        if (c < 0 || c >= k.size()) throw SchemaError("grid correlation cell out of range");
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw SchemaError("grid correlation cells must be distinct");
    return qdet(submatrix(k.table(), idx)).real();
}

std::vector<double> correlation_batch(const Kernel& k,
                                      const std::vector<std::vector<double>>& tuples) {
    std::vector<double> out(tuples.size());
#pragma omp parallel for schedule(dynamic)
    for (long long t = 0; t < static_cast<long long>(tuples.size()); ++t)
        out[t] = correlation(k, tuples[t]);
    return out;
}

std::vector<double> correlation_batch_serial(const Kernel& k,
                                             const std::vector<std::vector<double>>& tuples) {
    std::vector<double> out(tuples.size());
    for (size_t t = 0; t < tuples.size(); ++t) out[t] = correlation(k, tuples[t]);
    return out;
}

}  // namespace pfpp
