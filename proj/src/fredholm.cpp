#include "pfpp/fredholm.hpp"

#include <cmath>
#include <map>

#include "pfpp/errors.hpp"

namespace pfpp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxPathEvals = 1 << 14;

// log|det| and unit phase from an LU factorization; avoids overflow for large
// lifts by never forming the determinant directly.
struct DetLog {
    double log_mag;
    double arg;  // principal argument of the phase
};

DetLog det_log(const Eigen::MatrixXcd& m) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    double log_mag = 0.0;
    Complex phase(1.0);
    const auto& diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        const double a = std::abs(diag(i));
        if (a == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
        log_mag += std::log(a);
        phase *= diag(i) / a;
    }
    phase *= static_cast<double>(lu.permutationP().determinant());
    return {log_mag, std::arg(phase)};
}

double wrap_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a <= -kPi) a += 2.0 * kPi;
    return a;
}

Complex checked_scalar_qdet(const QMatrix& m, const char* what) {
    (void)what;
    return qdet(m);
}

FredholmResult signed_sqrt_path(const Eigen::MatrixXcd& a) {
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    std::map<double, DetLog> nodes;
    int evals = 0;
    auto eval_at = [&](double z) {
        const DetLog d = det_log(eye + z * a);
        ++evals;
        if (std::isinf(d.log_mag)) {
            // Singular at the endpoint means the square root itself is an
            // honest zero (its sign is moot); singular strictly inside the
            // path leaves no way to continue the branch.
            if (z == 1.0) return false;
            throw DegeneracyError("sign tracking: determinant path passes through zero");
        }
        nodes.emplace(z, d);
        return true;
    };
    bool endpoint_zero = false;
    for (int i = 0; i <= 32; ++i)
        if (!eval_at(i / 32.0)) endpoint_zero = true;
    if (endpoint_zero) return {Complex(0.0), FredholmRoute::SignTracked, evals, 0.0};

    // Bisect until adjacent determinant arguments differ by at most pi/2.
    bool refined = true;
    while (refined) {
        refined = false;
        auto it = nodes.begin();
        std::vector<double> midpoints;
        for (auto next = std::next(it); next != nodes.end(); ++it, ++next) {
            if (std::abs(wrap_angle(next->second.arg - it->second.arg)) > 0.5 * kPi)
                midpoints.push_back(0.5 * (it->first + next->first));
        }
        if (!midpoints.empty()) {
            if (evals + static_cast<int>(midpoints.size()) > kMaxPathEvals)
                throw DegeneracyError(
                    "sign tracking: path refinement exceeded its evaluation budget");
            for (double z : midpoints) eval_at(z);
            refined = true;
        }
    }

    // w(z)^2 = d(z) with w(0) = 1: accumulate half the log and half the
    // (wrapped) argument increments.
    double wlog = 0.0, warg = 0.0;
    auto it = nodes.begin();
    double prev_log = it->second.log_mag, prev_arg = it->second.arg;
    for (++it; it != nodes.end(); ++it) {
        wlog += 0.5 * (it->second.log_mag - prev_log);
        warg += 0.5 * wrap_angle(it->second.arg - prev_arg);
        prev_log = it->second.log_mag;
        prev_arg = it->second.arg;
    }
    const Complex value = std::exp(wlog) * Complex(std::cos(warg), std::sin(warg));
    const DetLog& end = nodes.rbegin()->second;
    const Complex det1 = std::exp(end.log_mag) * Complex(std::cos(end.arg), std::sin(end.arg));
    const double residual = std::abs(value * value - det1) / std::max(1.0, std::abs(det1));
    return {value, FredholmRoute::SignTracked, evals, residual};
}

}  // namespace

Complex fredholm_series_serial(const GridKernel& t) {
    const int n = t.size();
    if (n > 14) throw SchemaError("fredholm series is capped at 14 cells");
    Complex sum(0.0);
    for (uint32_t mask = 0; mask < (1u << n); ++mask)
        sum += qdet(submatrix_mask(t.table(), mask));
    return sum;
}

Complex fredholm_series(const GridKernel& t) {
    const int n = t.size();
    if (n > 14) throw SchemaError("fredholm series is capped at 14 cells");
    const long long count = 1ll << n;
    double re = 0.0, im = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : re, im)
    for (long long mask = 0; mask < count; ++mask) {
        const Complex v = qdet(submatrix_mask(t.table(), static_cast<uint32_t>(mask)));
        re += v.real();
        im += v.imag();
    }
    return {re, im};
}

Complex fredholm_qdet_direct(const GridKernel& t) {
    QMatrix m = QMatrix::identity(t.size());
    return checked_scalar_qdet(m + t.table(), "fredholm");
}

FredholmResult fredholm_signed(const QMatrix& table) {
    if (!table.is_self_adjoint())
        throw DegeneracyError("sign tracking requires a self-adjoint table");
    if (table.size() == 0) return {Complex(1.0), FredholmRoute::SignTracked, 1, 0.0};
    return signed_sqrt_path(complex_lift(table));
}

FredholmResult fredholm_signed(const GridKernel& t) { return fredholm_signed(t.table()); }

QMatrix multiplicative_table(const GridKernel& t, std::span<const double> g,
                             bool negate_branch) {
    const int n = t.size();
    if (static_cast<int>(g.size()) != n)
        throw SchemaError("weight vector length does not match the ground set");
    std::vector<Complex> s(n);
    for (int i = 0; i < n; ++i) {
        if (!(g[i] >= 0.0)) throw SchemaError("multiplicative weights must be nonnegative");
        s[i] = std::sqrt(Complex(g[i] - 1.0));
        if (negate_branch) s[i] = -s[i];
    }
    QMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = s[i] * t.table()(i, j) * s[j];
    m.declare_adjointness(Adjointness::SelfAdjoint);
    return m;
}

FredholmResult expectation_multiplicative(const GridKernel& t, std::span<const double> g) {
    return fredholm_signed(multiplicative_table(t, g));
}

FredholmResult gap_probability(const GridKernel& t, std::span<const int> window) {
    std::vector<double> g(t.size(), 1.0);
    for (int c : window) {
        if (c < 0 || c >= t.size()) throw SchemaError("gap window cell out of range");
        g[c] = 0.0;
    }
    return expectation_multiplicative(t, g);
}

}  // namespace pfpp
