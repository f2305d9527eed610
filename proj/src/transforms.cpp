#include "pfpp/transforms.hpp"

#include <algorithm>

#include "pfpp/errors.hpp"

namespace pfpp {

namespace {

// Positive real scalar intensity, or throw. `scale` sets the degeneracy floor.
Complex checked_density(const Quaternion& q, double scale, const char* what) {
    const double floor = 1e-12 * std::max(1.0, scale);
    if (vector_defect(q) > 1e-10 * std::max(1.0, max_abs(q)) + 1e-14)
        throw DegeneracyError(std::string(what) + ": intensity is not scalar");
    if (!(q.q0.real() > floor) || std::abs(q.q0.imag()) > floor)
        throw DegeneracyError(std::string(what) + ": intensity is not positive real (value " +
                              std::to_string(q.q0.real()) + ")");
    return q.q0;
}

void check_cells(std::span<const int> cells, int n, const char* what) {
    std::vector<int> sorted(cells.begin(), cells.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw SchemaError(std::string(what) + ": cells must be distinct");
    for (int c : sorted)
        if (c < 0 || c >= n) throw SchemaError(std::string(what) + ": cell index out of range");
}

double condition_number(const Eigen::MatrixXcd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

PalmKernel::PalmKernel(std::shared_ptr<const Kernel> base, double x0)
    : base_(std::move(base)), x0_(x0) {
    const Quaternion q00 = (*base_)(x0_, x0_);
    inv_density_ = 1.0 / checked_density(q00, max_abs(q00), "palm");
}

Quaternion PalmKernel::operator()(double x, double y) const {
    return (*base_)(x, y) - (*base_)(x, x0_) * inv_density_ * (*base_)(x0_, y);
}

std::shared_ptr<const Kernel> palm(std::shared_ptr<const Kernel> k, double x0) {
    return std::make_shared<PalmKernel>(std::move(k), x0);
}

std::shared_ptr<const Kernel> palm(std::shared_ptr<const Kernel> k,
                                   std::span<const double> points) {
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw SchemaError("palm points must be pairwise distinct");
    auto cur = std::move(k);
    for (double x : points) cur = std::make_shared<PalmKernel>(std::move(cur), x);
    return cur;
}

GridKernel palm_grid(const GridKernel& k, int cell) {
    const int cells[1] = {cell};
    return palm_grid(k, cells);
}

GridKernel palm_grid(const GridKernel& k, std::span<const int> cells) {
    check_cells(cells, k.size(), "palm");
    const int n = k.size();
    QMatrix t = k.table();
    const double scale = t.max_abs();
    for (int c : cells) {
        const Complex inv_d = 1.0 / checked_density(t(c, c), scale, "palm");
        QMatrix next(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) next(i, j) = t(i, j) - t(i, c) * inv_d * t(c, j);
        t = std::move(next);
        // The reduced row and column vanish identically; drop the rounding dust.
        for (int i = 0; i < n; ++i) {
            t(i, c) = Quaternion();
            t(c, i) = Quaternion();
        }
    }
    return GridKernel(k.ground(), std::move(t), /*symmetrize=*/true);
}

GridKernel kg_transform(const GridKernel& k, std::span<const double> g) {
    const int n = k.size();
    if (static_cast<int>(g.size()) != n)
        throw SchemaError("kg weight vector length does not match the ground set");
    for (double v : g)
        if (!(v >= 0.0)) throw SchemaError("kg weights must be nonnegative");

    const Eigen::MatrixXcd a = complex_lift(k.table());
    Eigen::VectorXcd gd(2 * n), sq(2 * n);
    for (int i = 0; i < n; ++i) {
        gd(2 * i) = gd(2 * i + 1) = Complex(g[i] - 1.0);
        sq(2 * i) = sq(2 * i + 1) = Complex(std::sqrt(g[i]));
    }
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(2 * n, 2 * n) + gd.asDiagonal() * a;
    if (condition_number(b) > 1e12)
        throw DegeneracyError("kg resolvent 1 + (g-1)K is ill-conditioned");
    Eigen::MatrixXcd m = a * b.partialPivLu().solve(
        Eigen::MatrixXcd::Identity(2 * n, 2 * n));
    m = sq.asDiagonal() * m * sq.asDiagonal();
    return GridKernel(k.ground(), from_complex_lift(m), /*symmetrize=*/true);
}

GridKernel conditional_kernel(const GridKernel& k, std::span<const int> window,
                              std::span<const int> occupied) {
    const int n = k.size();
    check_cells(window, n, "condition window");
    check_cells(occupied, n, "condition occupancy");
    for (int c : occupied)
        if (std::find(window.begin(), window.end(), c) == window.end())
            throw SchemaError("occupied cells must lie inside the window");

    const GridKernel reduced = occupied.empty() ? k : palm_grid(k, occupied);
    const Eigen::MatrixXcd a = complex_lift(reduced.table());

    Eigen::VectorXcd chi = Eigen::VectorXcd::Zero(2 * n);
    for (int c : window) chi(2 * c) = chi(2 * c + 1) = Complex(1.0);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(2 * n, 2 * n) - chi.asDiagonal() * a;
    if (condition_number(b) > 1e12)
        throw DegeneracyError("conditioning resolvent 1 - chi_B K is ill-conditioned");
    const Eigen::MatrixXcd full = a * b.partialPivLu().solve(
        Eigen::MatrixXcd::Identity(2 * n, 2 * n));

    std::vector<int> comp;
    for (int i = 0; i < n; ++i)
        if (std::find(window.begin(), window.end(), i) == window.end()) comp.push_back(i);
    const int m = static_cast<int>(comp.size());
    Eigen::MatrixXcd sub(2 * m, 2 * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            sub.block<2, 2>(2 * i, 2 * j) = full.block<2, 2>(2 * comp[i], 2 * comp[j]);
    return GridKernel(k.ground().restrict_to(comp), from_complex_lift(sub),
                      /*symmetrize=*/true);
}

}  // namespace pfpp
