#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "qcbel/fields.hpp"

using namespace qcbel;

TEST_CASE("bilinear interpolation reproduces bilinear data exactly") {
    Grid g = make_grid(-1, 1, -2, 2, 17, 33);
    // a + b x + c y + d x y is in the bilinear span on every cell
    auto f = [](cplx z) {
        return 0.7 - 1.3 * z.real() + 0.4 * z.imag() +
               2.1 * z.real() * z.imag();
    };
    RealField q = real_field(g, f);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-1, 1), uy(-2, 2);
    for (int k = 0; k < 200; ++k) {
        cplx z(ux(rng), uy(rng));
        CHECK(q.interp(z) == doctest::Approx(f(z)).epsilon(1e-12));
    }
    // outside the bbox the query is clamped to the edge
    CHECK(q.interp({5, 0}) == doctest::Approx(f({1, 0})));
}

TEST_CASE("dilatation algebra and ellipticity guard") {
    Grid g = make_grid(-1, 1, -1, 1, 33, 33);
    DomainSpec disk = DomainSpec::unit_disk();
    for (double k : {2.0, 5.0}) {
        ComplexField mu = mu_radial_stretch(g, disk, k);
        RealField K = dilatation(mu);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                if (mu.masked(i, j) && std::abs(mu.at(i, j)) > 0)
                    CHECK(K.at(i, j) == doctest::Approx(k));
    }

    ComplexField bad = complex_field(g, [](cplx) { return cplx(1.0, 0); });
    CHECK_THROWS_AS(dilatation(bad), EllipticityViolation);
}

TEST_CASE("truncation caps the dilatation and is idempotent") {
    Grid g = make_grid(-1, 1, -1, 1, 65, 65);
    DomainSpec disk = DomainSpec::unit_disk();
    ComplexField mu = mu_log_blowup(g, disk, {0, 0}, 2.0);
    ComplexField t = truncate_mu(mu, 3.0);
    RealField K = dilatation(t);
    double kmax = 0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (t.masked(i, j)) kmax = std::max(kmax, K.at(i, j));
    CHECK(kmax <= 3.0 + 1e-12);

    ComplexField tt = truncate_mu(t, 3.0);
    for (size_t n = 0; n < t.data.size(); ++n)
        CHECK(std::abs(tt.data[n] - t.data[n]) < 1e-15);
    // argument preserved where truncation bites
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (t.masked(i, j) && std::abs(mu.at(i, j)) > 1e-12) {
                cplx a = mu.at(i, j) / std::abs(mu.at(i, j));
                cplx b = t.at(i, j) / std::abs(t.at(i, j));
                CHECK(std::abs(a - b) < 1e-12);
            }
}

TEST_CASE("circle norm of a constant is length, average is the constant") {
    Grid g = make_grid(-1.2, 1.2, -1.2, 1.2, 129, 129);
    DomainSpec disk = DomainSpec::unit_disk();
    RealField one = real_field(g, disk, [](cplx) { return 1.0; });

    // full circle inside
    auto full = circle_norm(one, disk, {0, 0}, 0.5);
    CHECK(!full.empty_intersection);
    CHECK(full.value == doctest::Approx(M_PI).epsilon(1e-6));
    CHECK(full.length == doctest::Approx(M_PI).epsilon(1e-9));

    // circle centered on the boundary: arc length r * 2 acos(r/2)
    auto part = circle_norm(one, disk, {1, 0}, 0.5);
    double expected = 0.5 * 2 * std::acos(0.25);
    CHECK(part.length == doctest::Approx(expected).epsilon(1e-8));
    CHECK(part.value == doctest::Approx(expected).epsilon(1e-6));
    CHECK(circle_average(one, disk, {1, 0}, 0.5).value ==
          doctest::Approx(1.0).epsilon(1e-6));

    auto none = circle_norm(one, disk, {5, 0}, 0.5);
    CHECK(none.empty_intersection);
}

TEST_CASE("circle norm matches an analytic integrand") {
    // q = x^2 + 2 on the circle |z| = r: integral = r(pi r^2 + 4 pi)
    Grid g = make_grid(-1.2, 1.2, -1.2, 1.2, 513, 513);
    DomainSpec disk = DomainSpec::unit_disk();
    RealField q = real_field(
        g, disk, [](cplx z) { return z.real() * z.real() + 2.0; });
    double r = 0.7;
    auto res = circle_norm(q, disk, {0, 0}, r);
    double exact = r * (M_PI * r * r + 4 * M_PI);
    CHECK(res.value == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("grid integral and zero extension") {
    Grid g = make_grid(-1.5, 1.5, -1.5, 1.5, 401, 401);
    DomainSpec disk = DomainSpec::unit_disk();
    RealField q = real_field(g, disk, [](cplx) { return 2.0; });
    CHECK(grid_integral(q) == doctest::Approx(2 * M_PI).epsilon(0.01));

    RealField ext = extend_by_zero(q, disk);
    CHECK(ext.mask.empty());
    double total = 0;
    for (double v : ext.data) total += v;
    CHECK(total * g.cell_area() == doctest::Approx(2 * M_PI).epsilon(0.01));
}

TEST_CASE("built-in coefficients have the advertised moduli") {
    Grid g = make_grid(-1, 1, -1, 1, 33, 33);
    DomainSpec disk = DomainSpec::unit_disk();

    ComplexField c = mu_constant(g, disk, {0.3, 0.1});
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (c.masked(i, j))
                CHECK(c.at(i, j) == cplx(0.3, 0.1));

    ComplexField r = mu_radial_stretch(g, disk, 2.0);
    // at z = 0.5: mu = (1/3) z / conj(z) = 1/3 * e^{2i arg z} = 1/3
    double i0 = std::round((0.5 - g.xmin) / g.dx);
    double j0 = std::round((0.0 - g.ymin) / g.dy);
    CHECK(std::abs(r.at(int(i0), int(j0)) - cplx(1.0 / 3, 0)) < 1e-12);

    ComplexField lb = mu_log_blowup(g, disk, {0, 0}, 1.0);
    RealField K = dilatation(lb);
    // at |z| = 0.1 the dilatation is log(10)
    int i1 = int(std::round((0.1 - g.xmin) / g.dx));
    int j1 = int(std::round((0.0 - g.ymin) / g.dy));
    cplx z1 = g.node(i1, j1);
    CHECK(K.at(i1, j1) ==
          doctest::Approx(std::log(1.0 / std::abs(z1))).epsilon(1e-9));
}

TEST_CASE("mu csv round trip") {
    Grid g = make_grid(-1, 1, -1, 1, 9, 9);
    DomainSpec disk = DomainSpec::unit_disk();
    ComplexField mu = mu_constant(g, disk, {0.2, -0.1});
    std::string path = "mu_roundtrip.csv";
    {
        FILE* f = fopen(path.c_str(), "w");
        REQUIRE(f);
        fprintf(f, "i,j,re_mu,im_mu\n");
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                fprintf(f, "%d,%d,%.17g,%.17g\n", i, j,
                        mu.at(i, j).real(), mu.at(i, j).imag());
        fclose(f);
    }
    ComplexField back = load_mu_csv(g, disk, path);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (back.masked(i, j))
                CHECK(std::abs(back.at(i, j) - mu.at(i, j)) < 1e-15);
    remove(path.c_str());
}
