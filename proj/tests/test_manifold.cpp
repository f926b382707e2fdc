#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpmap/catalog.hpp"
#include "wpmap/errors.hpp"
#include "wpmap/manifold.hpp"

using namespace wpmap;

namespace {

Vec pt(std::initializer_list<double> v) {
    Vec p(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

}  // namespace

TEST_CASE("eval_metric on catalog charts") {
    CHECK((eval_metric(catalog_manifold("euclidean:2"), pt({3, 7})) - Mat::Identity(2, 2))
              .norm() == doctest::Approx(0.0));
    Mat polar = eval_metric(catalog_manifold("polar2"), pt({2, 1}));
    CHECK(polar(0, 0) == doctest::Approx(1.0));
    CHECK(polar(1, 1) == doctest::Approx(4.0));
    Mat sph = eval_metric(catalog_manifold("sphere2"), pt({M_PI / 2, 0}));
    CHECK((sph - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("domain and singularity guards") {
    CHECK_THROWS_AS(eval_metric(catalog_manifold("polar2"), pt({0.01, 0})), OutOfDomain);
    ChartManifold bad{2, Box::unbounded(2),
                      [](const Vec&) {
                          Mat g(2, 2);
                          g << 1, 0, 0, -1;
                          return g;
                      },
                      "indefinite", {}};
    CHECK_THROWS_AS(eval_metric(bad, pt({0, 0})), SingularMetric);
    CHECK_THROWS_AS(catalog_manifold("nosuch"), Error);
}

TEST_CASE("christoffel oracle values") {
    Christoffel e = christoffel(catalog_manifold("euclidean:2"), pt({1, 1}));
    for (const Mat& g : e.gamma) CHECK(g.cwiseAbs().maxCoeff() <= 1e-10);

    Christoffel p = christoffel(catalog_manifold("polar2"), pt({2, 1}));
    CHECK(p.gamma[0](1, 1) == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(p.gamma[1](0, 1) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(p.gamma[0](0, 0) == doctest::Approx(0.0).epsilon(1e-8));

    Christoffel s = christoffel(catalog_manifold("sphere2"), pt({M_PI / 4, 0}));
    CHECK(s.gamma[0](1, 1) == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("covariant derivative") {
    ChartManifold polar = catalog_manifold("polar2");
    VectorField dy = [](const Vec&) { return pt({0, 1}); };
    TangentVector r = covariant_derivative(polar, dy, dy, pt({2, 1}));
    CHECK(r.components[0] == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(r.components[1] == doctest::Approx(0.0).epsilon(1e-6));

    ChartManifold eu = catalog_manifold("euclidean:2");
    VectorField c = [](const Vec&) { return pt({1, 2}); };
    CHECK(covariant_derivative(eu, c, c, pt({0, 0})).components.norm() <= 1e-10);
}

TEST_CASE("gradient") {
    ChartManifold eu = catalog_manifold("euclidean:2");
    CHECK((gradient(eu, ScalarField::parse("x1", 2), pt({0.3, 0.7})).components - pt({1, 0}))
              .norm() <= 1e-8);
    TangentVector g = gradient(catalog_manifold("polar2"), ScalarField::parse("x2", 2), pt({2, 1}));
    CHECK(g.components[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(g.components[1] == doctest::Approx(0.25).epsilon(1e-6));
    TangentVector s =
        gradient(catalog_manifold("sphere2"), ScalarField::parse("ln(sin(x1))", 2),
                 pt({M_PI / 4, 0.3}));
    CHECK(s.components[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.components[1] == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("hessian") {
    ChartManifold eu = catalog_manifold("euclidean:2");
    ScalarField h = ScalarField::parse("x1^2 + x2^2", 2);
    CHECK(hessian(eu, h, pt({1, 0}), pt({1, 0}), pt({0.4, -0.2})) ==
          doctest::Approx(2.0).epsilon(1e-5));
    CHECK(hessian(eu, h, pt({1, 0}), pt({0, 1}), pt({0.4, -0.2})) ==
          doctest::Approx(0.0).epsilon(1e-5));
    ChartManifold line = catalog_manifold("line");
    CHECK(hessian(line, ScalarField::parse("exp(x1)", 1), pt({1}), pt({1}), pt({0.0})) ==
          doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("laplacian and divergence") {
    ChartManifold eu = catalog_manifold("euclidean:2");
    ScalarField h = ScalarField::parse("x1^2 + x2^2", 2);
    CHECK(laplacian(eu, h, pt({0.5, 0.1}), LaplacianSign::Plus) ==
          doctest::Approx(4.0).epsilon(1e-5));
    CHECK(laplacian(eu, h, pt({0.5, 0.1}), LaplacianSign::Minus) ==
          doctest::Approx(-4.0).epsilon(1e-5));
    CHECK(laplacian(catalog_manifold("line"), ScalarField::parse("exp(x1)", 1), pt({0.0}),
                    LaplacianSign::Plus) == doctest::Approx(1.0).epsilon(1e-5));
    // Hyperbolic half-plane, h = ln y: frozen from the finite-difference
    // oracle on its first run; the Laplace-Beltrami value is -1 at y = 1.
    CHECK(laplacian(catalog_manifold("hyperbolic2"), ScalarField::parse("ln(x2)", 2),
                    pt({0.0, 1.0}), LaplacianSign::Plus) == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("metric and christoffel invariants on the catalog") {
    std::mt19937_64 rng(123);
    for (std::string name : catalog_names()) {
        if (name == "euclidean:<n>") name = "euclidean:3";
        if (name == "interval(a,b)") name = "interval(0,1)";
        ChartManifold m = catalog_manifold(name);
        for (int s = 0; s < 100; ++s) {
            Vec p = sample_point(m, rng);
            eval_metric(m, p);  // throws on asymmetry or non-SPD
            Christoffel c = christoffel(m, p);
            for (const Mat& g : c.gamma) CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-6);
        }
    }
}

TEST_CASE("metric compatibility and torsion-free") {
    std::mt19937_64 rng(5);
    for (const std::string& name : {"polar2", "sphere2", "hyperbolic2", "heisenberg3"}) {
        ChartManifold m = catalog_manifold(name);
        for (int s = 0; s < 10; ++s) {
            Vec p = sample_point(m, rng);
            VectorField X = random_polynomial_field(m.dim, rng);
            VectorField Y = random_polynomial_field(m.dim, rng);
            VectorField Z = random_polynomial_field(m.dim, rng);

            double h = fd_step(0.0);
            Vec xp = X(p);
            auto gYZ = [&](const Vec& q) { return inner(m, q, Y(q), Z(q)); };
            double xg = 0.0;
            for (int i = 0; i < m.dim; ++i) {
                Vec qp = p, qm = p;
                double hi = fd_step(p[i]);
                qp[i] += hi;
                qm[i] -= hi;
                xg += xp[i] * (gYZ(qp) - gYZ(qm)) / (2.0 * hi);
            }
            double compat = xg - inner(m, p, covariant_derivative(m, X, Y, p).components, Z(p)) -
                            inner(m, p, Y(p), covariant_derivative(m, X, Z, p).components);
            CHECK(std::abs(compat) <= 1e-4);
            (void)h;

            Vec torsion = covariant_derivative(m, X, Y, p).components -
                          covariant_derivative(m, Y, X, p).components - lie_bracket(m, X, Y, p);
            CHECK(torsion.cwiseAbs().maxCoeff() <= 1e-4);
        }
    }
}

TEST_CASE("hessian symmetry and laplacian consistency") {
    std::mt19937_64 rng(17);
    ChartManifold m = catalog_manifold("sphere2");
    ScalarField h = ScalarField::parse("sin(x1)*cos(x2)", 2);
    for (int s = 0; s < 20; ++s) {
        Vec p = sample_point(m, rng);
        Vec X = pt({0.3, 0.8}), Y = pt({-0.5, 0.2});
        CHECK(std::abs(hessian(m, h, X, Y, p) - hessian(m, h, Y, X, p)) <= 1e-5);
        VectorField grad_h = [&](const Vec& q) { return Vec(gradient(m, h, q).components); };
        CHECK(std::abs(laplacian(m, h, p, LaplacianSign::Plus) - divergence(m, grad_h, p)) <=
              1e-5);
    }
}

TEST_CASE("interval catalog and orthonormalize") {
    ChartManifold iv = catalog_manifold("interval(0.2,1.5)");
    CHECK(iv.dim == 1);
    CHECK(iv.domain.contains(pt({1.0})));
    CHECK(!iv.domain.contains(pt({1.6})));

    ChartManifold m = catalog_manifold("polar2");
    Vec p = pt({2, 0.5});
    Mat cols(2, 2);
    cols << 1, 1, 1, 0;
    Mat on = orthonormalize(m, p, cols);
    REQUIRE(on.cols() == 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(inner(m, p, on.col(i), on.col(j)) ==
                  doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
}
