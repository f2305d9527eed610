#include <doctest.h>

#include <pfpp/errors.hpp>
#include <pfpp/instances.hpp>
#include <pfpp/qmatrix.hpp>
#include <pfpp/rng.hpp>
#include <pfpp/sampler.hpp>
#include <pfpp/transforms.hpp>

#include <memory>
#include <vector>

using namespace pfpp;

TEST_CASE("palm kernel vanishes at its point and reproduces the ratio law") {
    const auto base = std::make_shared<CseKernel>(6);
    const double x0 = 0.45;
    const auto p = palm(std::static_pointer_cast<const Kernel>(base), x0);

    // The reduced kernel annihilates the conditioning point.
    CHECK(max_abs((*p)(x0, 0.9)) < 1e-13);
    CHECK(max_abs((*p)(0.9, x0)) < 1e-13);

    // Reduced intensity = rho_2(x0, x) / rho_1(x0).
    const double den = correlation(*base, std::vector<double>{x0});
    for (double x : {-1.2, 0.1, 2.0}) {
        const double lhs = (*p)(x, x).q0.real() * den;
        const double rhs = correlation(*base, std::vector<double>{x0, x});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }

    // Two-step reduction is order independent.
    const double x1 = -0.7;
    const auto p01 = palm(p, x1);
    const auto p10 = palm(palm(std::static_pointer_cast<const Kernel>(base), x1), x0);
    for (double x : {0.3, 1.9}) {
        CHECK(max_abs((*p01)(x, 0.3) - (*p10)(x, 0.3)) < 1e-11);
        CHECK(max_abs((*p01)(x, x) - (*p10)(x, x)) < 1e-11);
    }
    // Span form matches composition.
    const std::vector<double> both{x0, x1};
    const auto ps = palm(std::static_pointer_cast<const Kernel>(base), both);
    CHECK(max_abs((*ps)(0.3, 1.9) - (*p01)(0.3, 1.9)) < 1e-11);
}

TEST_CASE("palm at a zero-intensity point is a degeneracy") {
    const auto base = std::make_shared<CseKernel>(4);
    const double x0 = 0.45;
    const auto p = palm(std::static_pointer_cast<const Kernel>(base), x0);
    // The reduced kernel has no mass left at x0.
    CHECK_THROWS_AS(palm(p, x0), DegeneracyError);

    const std::vector<double> dup{0.45, 0.45};
    CHECK_THROWS_AS(palm(std::static_pointer_cast<const Kernel>(base), dup), SchemaError);
}

TEST_CASE("grid palm reduction") {
    CounterRng rng(51, 0);
    const GridKernel t = random_projection_kernel(rng, 6, 3);
    const GridKernel r = palm_grid(t, 2);
    REQUIRE(r.size() == 6);  // the reduced cell keeps its slot
    CHECK(r.occupancy(2) < 1e-13);
    for (int j = 0; j < 6; ++j) {
        CHECK(max_abs(r.table()(2, j)) < 1e-12);
        CHECK(max_abs(r.table()(j, 2)) < 1e-12);
    }
    // Rank-one update: K'_ij = K_ij - K_i2 K_2j / K_22 on the weighted table.
    const QMatrix& m = t.table();
    const Complex inv = Complex(1.0) / m(2, 2).q0;
    for (int i = 0; i < 6; ++i) {
        if (i == 2) continue;
        for (int j = 0; j < 6; ++j) {
            if (j == 2) continue;
            const Quaternion expect = m(i, j) - m(i, 2) * inv * m(2, j);
            CHECK(max_abs(r.table()(i, j) - expect) < 1e-12);
        }
    }

    // Iterated reduction commutes.
    const GridKernel a = palm_grid(palm_grid(t, 1), 4);
    const GridKernel b = palm_grid(palm_grid(t, 4), 1);
    double err = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) err = std::max(err, max_abs(a.table()(i, j) - b.table()(i, j)));
    CHECK(err < 1e-11);
    const std::vector<int> cells{1, 4};
    const GridKernel c = palm_grid(t, cells);
    err = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) err = std::max(err, max_abs(a.table()(i, j) - c.table()(i, j)));
    CHECK(err < 1e-11);

    CHECK_THROWS_AS(palm_grid(t, 6), SchemaError);
    const std::vector<int> dup{1, 1};
    CHECK_THROWS_AS(palm_grid(t, dup), SchemaError);
    // Reducing twice at the same cell hits zero intensity.
    CHECK_THROWS_AS(palm_grid(r, 2), DegeneracyError);
}

TEST_CASE("grid palm matches the analytic reduction after discretization") {
    const auto base = std::make_shared<CseKernel>(5);
    const GroundSet g = GroundSet::uniform(-2.0, 2.0, 5);
    const GridKernel t = discretize(*base, g);
    const GridKernel lhs = palm_grid(t, 3);
    const auto reduced = palm(std::static_pointer_cast<const Kernel>(base), g.points[3]);
    const GridKernel rhs = discretize(*reduced, g);
    double err = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            err = std::max(err, max_abs(lhs.table()(i, j) - rhs.table()(i, j)));
    CHECK(err < 1e-11);
}

TEST_CASE("multiplicative weight transform") {
    CounterRng rng(52, 0);
    const GridKernel t = random_projection_kernel(rng, 6, 3);

    // Unit weights leave the table untouched.
    const std::vector<double> ones(6, 1.0);
    const GridKernel same = kg_transform(t, ones);
    double err = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            err = std::max(err, max_abs(same.table()(i, j) - t.table()(i, j)));
    CHECK(err < 1e-12);

    // Composition law: (K^g)^h = K^(g h).
    std::vector<double> g(6), h(6), gh(6);
    for (int i = 0; i < 6; ++i) {
        g[i] = 0.2 + 1.6 * rng.next_uniform();
        h[i] = 0.2 + 1.6 * rng.next_uniform();
        gh[i] = g[i] * h[i];
    }
    const GridKernel lhs = kg_transform(kg_transform(t, g), h);
    const GridKernel rhs = kg_transform(t, gh);
    err = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            err = std::max(err, max_abs(lhs.table()(i, j) - rhs.table()(i, j)));
    CHECK(err < 1e-9);

    // Zero weight everywhere needs 1 - K invertible; a projection has
    // eigenvalue one, so the resolvent blows up.
    const std::vector<double> zeros(6, 0.0);
    CHECK_THROWS_AS(kg_transform(t, zeros), DegeneracyError);

    std::vector<double> neg(6, 1.0);
    neg[2] = -0.1;
    CHECK_THROWS_AS(kg_transform(t, neg), SchemaError);
    const std::vector<double> short_g(5, 1.0);
    CHECK_THROWS_AS(kg_transform(t, short_g), SchemaError);
}

TEST_CASE("conditioning on an empty window is a pure weight transform") {
    CounterRng rng(53, 0);
    const GridKernel t = dilute_sine4_kernel(6);
    const std::vector<int> window{1, 3};
    const std::vector<int> none{};
    const GridKernel cond = conditional_kernel(t, window, none);
    // Same operator as killing the window multiplicatively, restricted to the
    // complement cells.
    std::vector<double> g(6, 1.0);
    g[1] = g[3] = 0.0;
    const GridKernel kg = kg_transform(t, g);
    const std::vector<int> comp{0, 2, 4, 5};
    REQUIRE(cond.size() == 4);
    double err = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            err = std::max(err, max_abs(cond.table()(i, j) - kg.table()(comp[i], comp[j])));
    CHECK(err < 1e-11);
}

TEST_CASE("conditional kernel contracts") {
    CounterRng rng(54, 0);
    const GridKernel t = random_projection_kernel(rng, 6, 2);
    const std::vector<int> window{0, 1};
    const std::vector<int> occ{0};
    CHECK_NOTHROW(conditional_kernel(t, window, occ));

    const std::vector<int> outside{0, 2};
    const std::vector<int> win{0, 1};
    CHECK_THROWS_AS(conditional_kernel(t, win, outside), SchemaError);

    // Conditioning on an impossible occupancy pattern degenerates: a 2-cell
    // rank-1 projection never fills both cells.
    QMatrix p(2);
    p(0, 0) = p(0, 1) = p(1, 0) = p(1, 1) = Quaternion(Complex(0.5));
    p.declare_adjointness(Adjointness::SelfAdjoint);
    const GridKernel tiny(GroundSet::uniform(0.0, 2.0, 2), p);
    const std::vector<int> both{0, 1};
    CHECK_THROWS_AS(conditional_kernel(tiny, both, both), DegeneracyError);
}

TEST_CASE("conditional kernel reproduces conditional correlations") {
    // Independent route: restrict-and-renormalize the exact atom law.
    CounterRng rng(55, 0);
    const GridKernel t = random_projection_kernel(rng, 6, 3);
    const AtomTable atoms = atom_oracle(t);
    const std::vector<int> window{1, 4};
    const std::vector<int> occupied{4};
    const AtomTable ref = conditional_atoms(atoms, window, occupied);
    const GridKernel cond = conditional_kernel(t, window, occupied);
    // Compare P(X contains S) for every subset of the complement cells.
    const std::vector<double> inc = principal_qdets_serial(cond);
    REQUIRE(inc.size() == ref.inclusion.size());
    for (size_t s = 0; s < inc.size(); ++s)
        CHECK(inc[s] == doctest::Approx(ref.inclusion[s]).epsilon(1e-9));
}
