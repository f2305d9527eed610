#include "pfpp/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>

#include "pfpp/errors.hpp"
#include "pfpp/fredholm.hpp"
#include "pfpp/instances.hpp"
#include "pfpp/kernels.hpp"
#include "pfpp/qmatrix.hpp"
#include "pfpp/sampler.hpp"
#include "pfpp/transforms.hpp"

namespace pfpp {

namespace {

using Clock = std::chrono::steady_clock;

double rel_err(const Complex& a, const Complex& b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double rel_err_q(const Quaternion& a, const Quaternion& b) {
    return max_abs(a - b) / std::max({1.0, max_abs(a), max_abs(b)});
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// Route agreement: recursion, combinatorial sum, and Pfaffian embedding give
// the same value on random self-adjoint matrices of every supported size.
CheckResult check_route_agreement(const VerifyOptions& opt) {
    CheckResult res{1, "determinant route agreement", false, 0.0, 1e-9, 0.0, ""};
    const int per_size = opt.quick ? 40 : 200;
    CounterRng rng(opt.seed, 101);
    for (int n = 1; n <= 6; ++n) {
        for (int it = 0; it < per_size; ++it) {
            const QMatrix m = random_self_adjoint(rng, n);
            const Complex pf = qdet(m);
            const Complex moore = qdet_moore(m);
            const Quaternion rec = qdet_recursive(m);
            res.max_err = std::max(res.max_err, rel_err(pf, moore));
            res.max_err = std::max(res.max_err, rel_err(pf, rec.q0));
            res.max_err = std::max(res.max_err, vector_defect(rec) /
                                                    std::max(1.0, std::abs(rec.q0)));
        }
    }
    res.pass = res.max_err <= res.tol;
    res.detail = std::to_string(per_size) + " matrices per size 1..6, three routes";
    return res;
}

CheckResult check_square_identity(const VerifyOptions& opt) {
    CheckResult res{2, "squared determinant equals lifted determinant", false, 0.0, 1e-8,
                    0.0, ""};
    const int per_size = opt.quick ? 8 : 25;
    CounterRng rng(opt.seed, 102);
    int count = 0;
    for (int n = 1; n <= 8; ++n) {
        for (int it = 0; it < per_size; ++it) {
            const QMatrix m = random_self_adjoint(rng, n);
            const Complex v = qdet(m);
            const Complex d = complex_lift(m).determinant();
            res.max_err = std::max(res.max_err, rel_err(v * v, d));
            ++count;
        }
    }
    res.pass = res.max_err <= res.tol;
    res.detail = std::to_string(count) + " matrices, sizes 1..8";
    return res;
}

CheckResult check_row_properties(const VerifyOptions& opt) {
    CheckResult res{3, "determinant row and block properties", false, 0.0, 1e-9, 0.0, ""};
    const int per_property = opt.quick ? 30 : 120;
    CounterRng rng(opt.seed, 103);

    // (a) expansion row does not matter on self-adjoint input
    for (int it = 0; it < per_property; ++it) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        const QMatrix m = random_self_adjoint(rng, n);
        const Quaternion ref = qdet_recursive(m, 0);
        for (int r = 1; r < n; ++r)
            res.max_err = std::max(res.max_err, rel_err_q(ref, qdet_recursive(m, r)));
    }

    // (b) identical rows force a zero determinant (self-adjoint duplication
    // and a duplicated exceptional row)
    for (int it = 0; it < per_property; ++it) {
        const int n = 3 + static_cast<int>(rng.next_u64() % 3);
        const QMatrix core = random_self_adjoint(rng, n - 1);
        const int dup = static_cast<int>(rng.next_u64() % (n - 1));
        std::vector<int> map(n);
        for (int i = 0; i < n - 1; ++i) map[i] = i;
        map[n - 1] = dup;
        QMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = core(map[i], map[j]);
        m.declare_adjointness(Adjointness::SelfAdjoint);
        res.max_err = std::max(res.max_err, std::abs(qdet(m)));

        QMatrix a = random_almost_self_adjoint(rng, n, n - 1);
        const int src = static_cast<int>(rng.next_u64() % (n - 1));
        for (int j = 0; j < n; ++j) a(n - 1, j) = a(src, j);
        const Quaternion v = qdet_recursive(a, n - 1);
        res.max_err = std::max(res.max_err, max_abs(v));
    }

    // (c) additivity in the exceptional row with everything else shared
    for (int it = 0; it < per_property; ++it) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        const int k = static_cast<int>(rng.next_u64() % n);
        QMatrix base = random_self_adjoint(rng, n);
        for (int j = 0; j < n; ++j)
            if (j != k) base(j, k) = random_quaternion(rng);
        QMatrix m1 = base, m2 = base, sum = base;
        for (int j = 0; j < n; ++j) {
            const Quaternion r1 = random_quaternion(rng);
            const Quaternion r2 = random_quaternion(rng);
            m1(k, j) = r1;
            m2(k, j) = r2;
            sum(k, j) = r1 + r2;
        }
        for (QMatrix* m : {&m1, &m2, &sum})
            m->declare_adjointness(Adjointness::AlmostSelfAdjoint, k);
        const Quaternion lhs = qdet_recursive(m1, k) + qdet_recursive(m2, k);
        res.max_err = std::max(res.max_err, rel_err_q(lhs, qdet_recursive(sum, k)));
    }

    // (d) congruence operations: swap keeps the value, scaling multiplies by
    // the scalar square, shear keeps the value
    for (int it = 0; it < per_property; ++it) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        const QMatrix m = random_self_adjoint(rng, n);
        const Complex v = qdet(m);
        const int i = static_cast<int>(rng.next_u64() % n);
        int j = static_cast<int>(rng.next_u64() % n);
        if (j == i) j = (j + 1) % n;
        const Quaternion q = random_quaternion(rng);

        res.max_err = std::max(res.max_err, rel_err(v, qdet(apply_elementary(m, SwapOp{i, j}))));
        res.max_err = std::max(
            res.max_err, rel_err(scalar_square(q) * v, qdet(apply_elementary(m, ScaleOp{i, q}))));
        res.max_err = std::max(
            res.max_err, rel_err(v, qdet(apply_elementary(m, AddMultipleOp{i, j, q}))));
    }

    // (e) block-diagonal multiplicativity
    for (int it = 0; it < per_property; ++it) {
        const int na = 1 + static_cast<int>(rng.next_u64() % 4);
        const int nb = 1 + static_cast<int>(rng.next_u64() % 4);
        const QMatrix a = random_self_adjoint(rng, na);
        const QMatrix b = random_self_adjoint(rng, nb);
        QMatrix m(na + nb);
        for (int p = 0; p < na; ++p)
            for (int q2 = 0; q2 < na; ++q2) m(p, q2) = a(p, q2);
        for (int p = 0; p < nb; ++p)
            for (int q2 = 0; q2 < nb; ++q2) m(na + p, na + q2) = b(p, q2);
        m.declare_adjointness(Adjointness::SelfAdjoint);
        res.max_err = std::max(res.max_err, rel_err(qdet(m), qdet(a) * qdet(b)));
    }

    res.pass = res.max_err <= res.tol;
    res.detail = std::to_string(per_property) +
                 " instances per property (expansion row, zero rows, additivity, "
                 "congruences, blocks)";
    return res;
}

CheckResult check_palm_identities(const VerifyOptions& opt) {
    CheckResult res{4, "palm reduction identities", false, 0.0, 1e-8, 0.0, ""};
    const int per_case = opt.quick ? 8 : 25;
    const double order_tol = 1e-10;
    CounterRng rng(opt.seed, 104);
    double order_err = 0.0;

    struct Family {
        std::shared_ptr<const Kernel> kernel;
        double lo, hi;
    };
    const Family families[] = {{std::make_shared<CseKernel>(6), -3.0, 3.0},
                               {std::make_shared<Sine4Kernel>(), -4.0, 4.0}};

    auto draw_points = [&](const Family& f, int count, std::vector<double>& out) {
        out.clear();
        while (static_cast<int>(out.size()) < count) {
            const double x = f.lo + (f.hi - f.lo) * rng.next_uniform();
            bool close = false;
            for (double y : out) close = close || std::abs(x - y) < 1e-3;
            if (!close) out.push_back(x);
        }
    };

    for (const Family& f : families) {
        // one-point identity: rho1(x0) * rho_n of the reduced kernel equals
        // the bordered (n+1)-point correlation
        for (int it = 0; it < per_case; ++it) {
            const int n = 1 + it % 3;
            std::vector<double> pts;
            draw_points(f, n + 1, pts);
            const double x0 = pts.back();
            pts.pop_back();
            const double den = (*f.kernel)(x0, x0).q0.real();
            const auto reduced = palm(f.kernel, x0);
            const double lhs = den * correlation(*reduced, pts);
            std::vector<double> all(pts);
            all.insert(all.begin(), x0);
            const double rhs = correlation(*f.kernel, all);
            res.max_err = std::max(res.max_err, std::abs(lhs - rhs) /
                                                    std::max({1.0, std::abs(lhs), std::abs(rhs)}));
        }

        // m-point ratio identity
        for (int it = 0; it < per_case; ++it) {
            const int m = 1 + it % 3;
            const int n = 1 + (it / 3) % 3;
            std::vector<double> pts;
            double den = 0.0;
            std::vector<double> xs, ys;
            for (int attempt = 0; attempt < 100; ++attempt) {
                draw_points(f, m + n, pts);
                xs.assign(pts.begin(), pts.begin() + m);
                ys.assign(pts.begin() + m, pts.end());
                den = correlation(*f.kernel, xs);
                if (std::abs(den) > 1e-3) break;
            }
            const auto reduced = palm(f.kernel, xs);
            const double lhs = correlation(*reduced, ys);
            std::vector<double> all(xs);
            all.insert(all.end(), ys.begin(), ys.end());
            const double rhs = correlation(*f.kernel, all) / den;
            res.max_err = std::max(res.max_err, std::abs(lhs - rhs) /
                                                    std::max({1.0, std::abs(lhs), std::abs(rhs)}));
        }

        // iterated reduction is order-invariant
        for (int it = 0; it < std::max(4, per_case / 2); ++it) {
            std::vector<double> pts;
            draw_points(f, 4, pts);
            const auto ab = palm(palm(f.kernel, pts[0]), pts[1]);
            const auto ba = palm(palm(f.kernel, pts[1]), pts[0]);
            const Quaternion va = (*ab)(pts[2], pts[3]);
            const Quaternion vb = (*ba)(pts[2], pts[3]);
            order_err = std::max(order_err, max_abs(va - vb) / std::max(1.0, max_abs(va)));
        }
    }

    res.pass = res.max_err <= res.tol && order_err <= order_tol;
    res.detail = "two kernel families, m,n <= 3; order-invariance err " + fmt(order_err) +
                 " (tol 1e-10)";
    return res;
}

CheckResult check_multiplicative_factorization(const VerifyOptions& opt) {
    CheckResult res{5, "multiplicative transform factorization", false, 0.0, 1e-8, 0.0, ""};
    const int per_kernel = opt.quick ? 4 : 15;
    CounterRng rng(opt.seed, 105);
    const GridKernel kernels[] = {dilute_sine4_kernel(8), random_projection_kernel(rng, 8, 4)};
    bool unit_exact = true;
    for (const GridKernel& t : kernels) {
        for (int it = 0; it < per_kernel; ++it) {
            std::vector<double> g(t.size()), h(t.size()), gh(t.size());
            for (int i = 0; i < t.size(); ++i) {
                g[i] = 2.0 * rng.next_uniform();
                h[i] = 2.0 * rng.next_uniform();
                gh[i] = g[i] * h[i];
            }
            const Complex lhs = expectation_multiplicative(t, gh).value;
            const Complex first = expectation_multiplicative(t, g).value;
            const GridKernel tg = kg_transform(t, g);
            const Complex second = expectation_multiplicative(tg, h).value;
            res.max_err = std::max(res.max_err, rel_err(lhs, first * second));
        }
        const std::vector<double> ones(t.size(), 1.0);
        const Complex unit = expectation_multiplicative(t, ones).value;
        unit_exact = unit_exact && unit.real() == 1.0 && unit.imag() == 0.0;
    }
    res.pass = res.max_err <= res.tol && unit_exact;
    res.detail = std::string("8-cell dilute and projection kernels; unit weight exact: ") +
                 (unit_exact ? "yes" : "NO");
    return res;
}

CheckResult check_fredholm_routes(const VerifyOptions& opt) {
    CheckResult res{6, "fredholm series equals tracked square root", false, 0.0, 1e-9, 0.0,
                    ""};
    const int per_size = opt.quick ? 2 : 8;
    CounterRng rng(opt.seed, 106);
    int steps_max = 0;
    for (int n : {1, 2, 4, 6, 8, 10}) {
        for (int it = 0; it < per_size; ++it) {
            const double scale = (it % 3 == 2) ? 1.1 : 0.5;
            const GridKernel t = random_grid_kernel(rng, n, scale);
            const Complex series = fredholm_series(t);
            const FredholmResult tracked = fredholm_signed(t);
            res.max_err = std::max(res.max_err, rel_err(series, tracked.value));
            steps_max = std::max(steps_max, tracked.path_steps);
        }
    }
    QMatrix zero(6);
    zero.declare_adjointness(Adjointness::SelfAdjoint);
    const GridKernel zt(GroundSet::uniform(0.0, 6.0, 6), zero);
    const Complex zs = fredholm_series(zt);
    const Complex zv = fredholm_signed(zt).value;
    const bool zero_exact =
        zs.real() == 1.0 && zs.imag() == 0.0 && zv.real() == 1.0 && zv.imag() == 0.0;

    res.pass = res.max_err <= res.tol && zero_exact;
    res.detail = "sizes 1..10, longest path " + std::to_string(steps_max) +
                 " steps; zero kernel exact: " + (zero_exact ? "yes" : "NO");
    return res;
}

CheckResult check_conditional_vs_oracle(const VerifyOptions& opt) {
    CheckResult res{7, "conditional kernel matches brute-force oracle", false, 0.0, 1e-8,
                    0.0, ""};
    CounterRng rng(opt.seed, 107);
    std::vector<GridKernel> kernels;
    if (opt.quick) {
        kernels.push_back(random_projection_kernel(rng, 6, 2));
        kernels.push_back(dilute_sine4_kernel(6));
    } else {
        kernels.push_back(random_projection_kernel(rng, 10, 4));
        kernels.push_back(random_projection_kernel(rng, 8, 3));
        kernels.push_back(dilute_sine4_kernel(8));
    }
    long conditions = 0, skipped = 0;
    for (const GridKernel& t : kernels) {
        const AtomTable atoms = atom_oracle(t);
        const int n = t.size();
        for (uint32_t wmask = 1; wmask < (1u << n); ++wmask) {
            if (std::popcount(wmask) > 3) continue;
            std::vector<int> window;
            for (int i = 0; i < n; ++i)
                if (wmask & (1u << i)) window.push_back(i);
            for (uint32_t sub = wmask;; sub = (sub - 1) & wmask) {
                double event = 0.0;
                for (uint32_t s = 0; s < atoms.prob.size(); ++s)
                    if ((s & wmask) == sub) event += atoms.prob[s];
                if (event > 1e-10) {
                    std::vector<int> occ;
                    for (int i = 0; i < n; ++i)
                        if (sub & (1u << i)) occ.push_back(i);
                    const GridKernel cond = conditional_kernel(t, window, occ);
                    const AtomTable ref = conditional_atoms(atoms, window, occ);
                    const std::vector<double> pred = principal_qdets_serial(cond);
                    for (size_t s = 0; s < pred.size(); ++s)
                        res.max_err =
                            std::max(res.max_err, std::abs(pred[s] - ref.inclusion[s]));
                    ++conditions;
                } else {
                    ++skipped;
                }
                if (sub == 0) break;
            }
        }
    }
    res.pass = res.max_err <= res.tol;
    res.detail = std::to_string(conditions) + " positive-probability conditions (" +
                 std::to_string(skipped) + " null conditions skipped), windows up to 3 cells";
    return res;
}

CheckResult check_gap_identity(const VerifyOptions& opt) {
    CheckResult res{8, "gap probability identity", false, 0.0, 1e-8, 0.0, ""};
    CounterRng rng(opt.seed, 108);
    std::vector<GridKernel> kernels;
    if (opt.quick) {
        kernels.push_back(random_projection_kernel(rng, 6, 3));
    } else {
        kernels.push_back(random_projection_kernel(rng, 10, 4));
        kernels.push_back(dilute_sine4_kernel(8));
    }
    long windows = 0;
    for (const GridKernel& t : kernels) {
        const AtomTable atoms = atom_oracle(t);
        const int n = t.size();
        std::vector<double> below = atoms.prob;  // sum over subsets transform
        for (int b = 0; b < n; ++b)
            for (uint32_t s = 0; s < below.size(); ++s)
                if (s & (1u << b)) below[s] += below[s ^ (1u << b)];
        const uint32_t full = (1u << n) - 1;
        for (uint32_t wmask = 0; wmask <= full; ++wmask) {
            std::vector<int> window;
            for (int i = 0; i < n; ++i)
                if (wmask & (1u << i)) window.push_back(i);
            const FredholmResult gap = gap_probability(t, window);
            const double oracle = below[full & ~wmask];
            res.max_err = std::max(res.max_err, std::abs(gap.value.real() - oracle));
            res.max_err = std::max(res.max_err, std::abs(gap.value.imag()));
            ++windows;
        }
    }
    res.pass = res.max_err <= res.tol;
    res.detail = std::to_string(windows) + " windows (every subset of every ground set)";
    return res;
}

CheckResult check_sampler(const VerifyOptions& opt) {
    CheckResult res{9, "sampler chain consistency and empirical law", false, 0.0, 1e-9, 0.0,
                    ""};
    const double budget = 120.0;
    CounterRng rng(opt.seed, 109);
    const auto t0 = Clock::now();

    std::vector<GridKernel> chain_kernels;
    chain_kernels.push_back(opt.quick ? random_projection_kernel(rng, 6, 2)
                                      : random_projection_kernel(rng, 8, 3));
    if (!opt.quick) chain_kernels.push_back(dilute_sine4_kernel(6));

    long pruned = 0;
    for (const GridKernel& t : chain_kernels) {
        const AtomTable atoms = atom_oracle(t);
        const int n = t.size();
        for (uint32_t mask = 0; mask < (1u << n); ++mask) {
            double prod = 1.0;
            bool prune = false;
            for (int i = 0; i < n && !prune; ++i) {
                const double p = occupancy_probability(t, i, mask & ((1u << i) - 1));
                const bool bit = (mask >> i) & 1u;
                const double factor = bit ? p : 1.0 - p;
                // A factor this small caps the whole mask below tolerance, and
                // replaying past it would condition on a near-impossible event
                // (the reducer refuses cells with vanishing intensity).
                if (factor <= 1e-9) {
                    prune = true;
                    if (atoms.prob[mask] > 1e-12)
                        res.max_err = std::max(res.max_err, atoms.prob[mask]);
                    ++pruned;
                }
                prod *= factor;
            }
            if (!prune)
                res.max_err = std::max(res.max_err, std::abs(prod - atoms.prob[mask]));
        }

        // the in-place sweep agrees with the from-scratch conditional kernel
        int compared = 0;
        for (uint32_t mask = 0; mask < (1u << n) && compared < 40; ++mask) {
            if (atoms.prob[mask] < 1e-6) continue;
            const int cell = static_cast<int>(rng.next_u64() % n);
            const double fast = occupancy_probability(t, cell, mask & ((1u << cell) - 1));
            const double ref =
                occupancy_probability_reference(t, cell, mask & ((1u << cell) - 1));
            res.max_err = std::max(res.max_err, std::abs(fast - ref));
            ++compared;
        }
    }
    const bool chain_ok = res.max_err <= res.tol;

    const GridKernel tv_kernel = random_projection_kernel(rng, 8, 3);
    const AtomTable tv_atoms = atom_oracle(tv_kernel);
    const int samples = opt.quick ? 20000 : 200000;
    const double tv_tol = opt.quick ? 0.03 : 0.01;
    const SampleBatch batch = sequential_sample(tv_kernel, opt.seed + 1, samples);
    const double tv = batch.tv_distance(tv_atoms);

    res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    res.pass = chain_ok && tv <= tv_tol && res.seconds < budget;
    res.detail = "chain err " + fmt(res.max_err) + " (" + std::to_string(pruned) +
                 " null prefixes pruned); TV " + fmt(tv) + " over " +
                 std::to_string(samples) + " samples (bound " + fmt(tv_tol) + ")";
    return res;
}

CheckResult check_kernel_values(const VerifyOptions& opt) {
    CheckResult res{10, "reference kernel values", false, 0.0, 1e-9, 0.0, ""};
    double sine_err = 0.0;
    const Sine4Kernel sine;
    for (double x : {0.0, 0.37, -2.5, 10.0}) {
        const std::vector<double> pt{x};
        sine_err = std::max(sine_err, std::abs(correlation(sine, pt) - 0.25));
    }

    double cse_err = 0.0;
    for (int n = 1; n <= 8; ++n) {
        const CseKernel k(n);
        const double expected = n / (2.0 * std::numbers::pi);
        cse_err = std::max(cse_err, std::abs(k.mean_density() - expected));
        const std::vector<double> pt{0.4 * n - 1.0};
        cse_err = std::max(cse_err, std::abs(correlation(k, pt) - expected));
    }

    double form_err = 0.0;
    for (int n : {3, 6}) {
        const CseKernel k(n);
        for (int i = 0; i < 50; ++i) {
            const double theta =
                std::numbers::pi * (-1.0 + (i + 0.5) * (2.0 / 50.0));
            const Quaternion a = k.eval_sum(theta);
            const Quaternion b = k.eval_closed(theta);
            form_err = std::max(form_err, max_abs(a - b) / std::max(1.0, max_abs(a)));
        }
    }

    res.max_err = std::max({sine_err, cse_err, form_err});
    res.pass = sine_err <= 1e-12 && cse_err <= 1e-10 && form_err <= 1e-9;
    res.detail = "intensity errs " + fmt(sine_err) + " (tol 1e-12) / " + fmt(cse_err) +
                 " (tol 1e-10); sum vs closed form " + fmt(form_err) + " on 50 angles";
    (void)opt;
    return res;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
    using CheckFn = std::function<CheckResult(const VerifyOptions&)>;
    const std::pair<CheckFn, double> checks[] = {
        {check_route_agreement, 30.0},   {check_square_identity, 0.0},
        {check_row_properties, 0.0},     {check_palm_identities, 0.0},
        {check_multiplicative_factorization, 0.0},
        {check_fredholm_routes, 60.0},   {check_conditional_vs_oracle, 0.0},
        {check_gap_identity, 0.0},       {check_sampler, 0.0},
        {check_kernel_values, 0.0},
    };
    std::vector<CheckResult> results;
    int id = 1;
    for (const auto& [fn, budget] : checks) {
        const auto t0 = Clock::now();
        CheckResult r;
        try {
            r = fn(opt);
        } catch (const std::exception& e) {
            r.id = id;
            r.name = "check " + std::to_string(id);
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (r.seconds == 0.0)
            r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (budget > 0.0 && r.seconds >= budget) {
            r.pass = false;
            r.detail += " [exceeded " + fmt(budget) + " s budget]";
        }
        results.push_back(std::move(r));
        ++id;
    }
    return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.pass; });
}

}  // namespace pfpp
