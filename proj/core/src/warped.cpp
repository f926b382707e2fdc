#include "wpmap/warped.hpp"

#include <cmath>
#include <sstream>

#include "wpmap/catalog.hpp"
#include "wpmap/errors.hpp"

namespace wpmap {

WarpedProduct WarpedProduct::build(ChartManifold base, ChartManifold fiber, ScalarField warp) {
    std::mt19937_64 rng(0x77617270u);  // fixed probe seed, build is deterministic
    for (int i = 0; i < 1000; ++i) {
        Vec p1 = sample_point(base, rng);
        double f = warp(p1);
        if (!(f > 0.0)) {
            std::ostringstream os;
            os << warp.label() << " = " << f << " at (" << p1.transpose() << ")";
            throw NonPositiveWarp(os.str());
        }
    }
    WarpedProduct w;
    w.base_ = base;
    w.fiber_ = fiber;
    w.warp_ = warp;

    ChartManifold prod;
    prod.dim = base.dim + fiber.dim;
    prod.domain.lo = Vec(prod.dim);
    prod.domain.hi = Vec(prod.dim);
    prod.domain.lo << base.domain.lo, fiber.domain.lo;
    prod.domain.hi << base.domain.hi, fiber.domain.hi;
    int m1 = base.dim, m2 = fiber.dim;
    MetricFn g1 = base.metric, g2 = fiber.metric;
    ScalarField f = warp;
    prod.metric = [m1, m2, g1, g2, f](const Vec& p) {
        Vec p1 = p.head(m1), p2 = p.tail(m2);
        double ff = f(p1);
        Mat g = Mat::Zero(m1 + m2, m1 + m2);
        g.topLeftCorner(m1, m1) = g1(p1);
        g.bottomRightCorner(m2, m2) = ff * ff * g2(p2);
        return g;
    };
    prod.name = base.name + " x_{" + warp.label() + "} " + fiber.name;
    prod.fd = base.fd;
    w.product_ = prod;
    return w;
}

std::pair<Vec, Vec> WarpedProduct::split(const Vec& v) const {
    return {v.head(base_.dim), v.tail(fiber_.dim)};
}

Vec WarpedProduct::lift(int origin, const Vec& factor_vec) const {
    Vec out = Vec::Zero(dim());
    if (origin == 1)
        out.head(base_.dim) = factor_vec;
    else
        out.tail(fiber_.dim) = factor_vec;
    return out;
}

LiftedField WarpedProduct::lift_field(int origin, VectorField factor_field) const {
    return {origin, std::move(factor_field)};
}

LiftedField WarpedProduct::as_lifted(const VectorField& product_field, int origin,
                                     std::mt19937_64& rng) const {
    for (int i = 0; i < 16; ++i) {
        Vec p = sample_point(product_, rng);
        Vec v = product_field(p);
        Vec other = origin == 1 ? v.tail(fiber_.dim) : Vec(v.head(base_.dim));
        if (other.cwiseAbs().maxCoeff() > 1e-12)
            throw MixedField("field has components outside factor " + std::to_string(origin));
    }
    int m1 = base_.dim, m2 = fiber_.dim;
    VectorField pf = product_field;
    if (origin == 1) {
        // Evaluate on the base chart by padding an arbitrary fiber point; a pure
        // lift may not depend on the fiber coordinates.
        Vec pad = fiber_.domain.sampling_box().lo;
        return {1, [pf, m1, m2, pad](const Vec& p1) {
                    Vec p(m1 + m2);
                    p << p1, pad;
                    return Vec(pf(p).head(m1));
                }};
    }
    Vec pad = base_.domain.sampling_box().lo;
    return {2, [pf, m1, m2, pad](const Vec& p2) {
                Vec p(m1 + m2);
                p << pad, p2;
                return Vec(pf(p).tail(m2));
            }};
}

Vec WarpedProduct::grad_ln_warp(const Vec& p) const {
    Vec p1 = base_point(p);
    double f = warp_(p1);
    Vec df(base_.dim);
    for (int i = 0; i < base_.dim; ++i) df[i] = warp_.deriv(i, p1);
    Mat g1inv = metric_inverse(base_, p1);
    return lift(1, Vec(g1inv * (df / f)));
}

TangentVector WarpedProduct::warped_connection(const LiftedField& X, const LiftedField& Y,
                                               const Vec& p) const {
    require_in_domain(product_, p);
    Vec p1 = base_point(p), p2 = fiber_point(p);
    if (X.origin == 1 && Y.origin == 1) {
        TangentVector d = covariant_derivative(base_, X.field, Y.field, p1);
        return {p, lift(1, d.components)};
    }
    if (X.origin != Y.origin) {
        const LiftedField& bf = X.origin == 1 ? X : Y;   // base factor
        const LiftedField& ff = X.origin == 1 ? Y : X;   // fiber factor
        Vec x1 = bf.field(p1);
        double df = 0.0;
        for (int i = 0; i < base_.dim; ++i) df += x1[i] * warp_.deriv(i, p1);
        return {p, lift(2, Vec((df / warp_(p1)) * ff.field(p2)))};
    }
    // (2,2): lift of the fiber connection minus g_M(X2,Y2) grad ln f.
    TangentVector d = covariant_derivative(fiber_, X.field, Y.field, p2);
    double f = warp_(p1);
    double gxy = f * f * X.field(p2).dot(fiber_.metric(p2) * Y.field(p2));
    Vec out = lift(2, d.components) - gxy * grad_ln_warp(p);
    return {p, out};
}

WarpedProduct::Lemma22Report WarpedProduct::verify_lemma22(int samples,
                                                           std::mt19937_64& rng) const {
    Lemma22Report rep;
    for (int s = 0; s < samples; ++s) {
        Vec p = sample_point(product_, rng);
        LiftedField X1 = lift_field(1, random_polynomial_field(base_.dim, rng));
        LiftedField Y1 = lift_field(1, random_polynomial_field(base_.dim, rng));
        LiftedField X2 = lift_field(2, random_polynomial_field(fiber_.dim, rng));
        LiftedField Y2 = lift_field(2, random_polynomial_field(fiber_.dim, rng));

        auto padded = [this](const LiftedField& lf) -> VectorField {
            int m1 = base_.dim, m2 = fiber_.dim;
            VectorField f = lf.field;
            int origin = lf.origin;
            return [f, m1, m2, origin](const Vec& p) {
                Vec out = Vec::Zero(m1 + m2);
                if (origin == 1)
                    out.head(m1) = f(p.head(m1));
                else
                    out.tail(m2) = f(p.tail(m2));
                return out;
            };
        };

        const LiftedField* xs[4] = {&X1, &X1, &X2, &X2};
        const LiftedField* ys[4] = {&Y1, &X2, &X1, &Y2};
        for (int c = 0; c < 4; ++c) {
            Vec closed = warped_connection(*xs[c], *ys[c], p).components;
            Vec brute =
                covariant_derivative(product_, padded(*xs[c]), padded(*ys[c]), p).components;
            double r = (closed - brute).cwiseAbs().maxCoeff();
            rep.residual[c] = std::max(rep.residual[c], r);
        }
    }
    rep.max_residual = std::max(std::max(rep.residual[0], rep.residual[1]),
                                std::max(rep.residual[2], rep.residual[3]));
    return rep;
}

WarpedProduct catalog_warped(const std::string& name) {
    if (name == "product") {
        return WarpedProduct::build(catalog_manifold("line"), catalog_manifold("line"),
                                    ScalarField([](const Vec&) { return 1.0; }, "1"));
    }
    if (name == "spheremodel") {
        ChartManifold base = catalog_manifold("interval(0.05," + std::to_string(M_PI - 0.05) + ")");
        return WarpedProduct::build(base, catalog_manifold("circle"),
                                    ScalarField::parse("sin(x1)", 1));
    }
    if (name == "h3model") {
        return WarpedProduct::build(catalog_manifold("line"), catalog_manifold("euclidean:2"),
                                    ScalarField::parse("exp(x1)", 1));
    }
    if (name == "coshmodel") {
        return WarpedProduct::build(
            catalog_manifold("line"), catalog_manifold("line"),
            ScalarField([](const Vec& p) { return std::cosh(p[0]); }, "cosh(x1)"));
    }
    throw ConfigError("unknown catalog warped product '" + name + "'");
}

std::vector<std::string> catalog_warped_names() {
    return {"coshmodel", "h3model", "product", "spheremodel"};
}

}  // namespace wpmap
