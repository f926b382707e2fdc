#include "wpmap/geodesic.hpp"

#include <cmath>

#include "wpmap/errors.hpp"

namespace wpmap {

namespace {

Vec acceleration(const ChartManifold& m, const Vec& p, const Vec& v) {
    return -christoffel(m, p).apply(v, v);
}

}  // namespace

Vec GeodesicTrace::along_curve_derivative(const std::vector<Vec>& W, std::size_t i) const {
    double dt = t[1] - t[0];
    Vec wdot = (W[i + 1] - W[i - 1]) / (2.0 * dt);
    return wdot + christoffel(manifold, p[i]).apply(v[i], W[i]);
}

GeodesicTrace integrate(const ChartManifold& m, const Vec& p0, const Vec& v0, double t_end,
                        double dt) {
    require_in_domain(m, p0);
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (v0.cwiseAbs().maxCoeff() == 0.0) throw ConfigError("zero initial velocity");

    GeodesicTrace tr;
    tr.manifold = m;
    tr.b0 = inner(m, p0, v0, v0);

    Vec p = p0, v = v0;
    double t = 0.0;
    std::size_t nsteps = static_cast<std::size_t>(std::llround(t_end / dt));
    tr.t.reserve(nsteps + 1);
    tr.p.reserve(nsteps + 1);
    tr.v.reserve(nsteps + 1);
    tr.t.push_back(t);
    tr.p.push_back(p);
    tr.v.push_back(v);

    for (std::size_t s = 0; s < nsteps; ++s) {
        try {
            Vec k1p = v, k1v = acceleration(m, p, v);
            Vec k2p = v + 0.5 * dt * k1v, k2v = acceleration(m, p + 0.5 * dt * k1p, k2p);
            Vec k3p = v + 0.5 * dt * k2v, k3v = acceleration(m, p + 0.5 * dt * k2p, k3p);
            Vec k4p = v + dt * k3v, k4v = acceleration(m, p + dt * k3p, k4p);
            p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        } catch (const OutOfDomain&) {
            tr.domain_exit = true;
            break;
        }
        if (!m.domain.contains(p)) {
            tr.domain_exit = true;
            break;
        }
        t += dt;
        tr.t.push_back(t);
        tr.p.push_back(p);
        tr.v.push_back(v);
        double bt = inner(m, p, v, v);
        if (std::abs(bt - tr.b0) > 1e-3 * std::abs(tr.b0))
            throw StepTooLarge("energy drift " + std::to_string(std::abs(bt - tr.b0) / tr.b0) +
                               " at t=" + std::to_string(t) + "; reduce dt");
    }
    return tr;
}

GeodesicTrace trace_curve(const ChartManifold& m, const std::function<Vec(double)>& pos,
                          const std::function<Vec(double)>& vel, double t0, double t1, double dt) {
    GeodesicTrace tr;
    tr.manifold = m;
    std::size_t nsteps = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
    for (std::size_t s = 0; s <= nsteps; ++s) {
        double t = t0 + s * dt;
        Vec p = pos(t);
        if (!m.domain.contains(p)) {
            tr.domain_exit = true;
            break;
        }
        tr.t.push_back(t);
        tr.p.push_back(p);
        tr.v.push_back(vel(t));
    }
    if (!tr.p.empty()) tr.b0 = inner(m, tr.p[0], tr.v[0], tr.v[0]);
    return tr;
}

void decompose(const RiemannianMap& phi, GeodesicTrace& trace) {
    std::size_t n = trace.size();
    trace.U.resize(n);
    trace.Y.resize(n);
    trace.b.resize(n);
    trace.omega.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& p = trace.p[i];
        const Vec& v = trace.v[i];
        Mat PV = phi.vertical_projector(p);
        trace.U[i] = PV * v;
        trace.Y[i] = v - trace.U[i];
        trace.b[i] = inner(trace.manifold, p, v, v);
        double gu = std::max(0.0, inner(trace.manifold, p, trace.U[i], trace.U[i]));
        double gy = std::max(0.0, inner(trace.manifold, p, trace.Y[i], trace.Y[i]));
        // atan2 limits give omega = 0 for U = 0 and pi/2 for Y = 0.
        trace.omega[i] = std::atan2(std::sqrt(gu), std::sqrt(gy));
    }
    trace.decomposed = true;
}

Theorem31Residuals theorem31_residuals(const RiemannianMap& phi, const GeodesicTrace& trace,
                                       GeodesicCase which, std::size_t stride) {
    if (!trace.decomposed) throw ConfigError("trace not decomposed");
    const double half_pi = M_PI / 2.0;
    if (which == GeodesicCase::Vertical) {
        for (double w : trace.omega)
            if (w < half_pi - 0.1)
                throw CaseMismatch("vertical case requested but omega < pi/2 - 0.1");
    } else if (which == GeodesicCase::Horizontal) {
        for (double w : trace.omega)
            if (w > 0.1) throw CaseMismatch("horizontal case requested but omega > 0.1");
    } else {
        bool all_vert = true, all_hor = true;
        for (double w : trace.omega) {
            if (w < half_pi - 0.1) all_vert = false;
            if (w > 0.1) all_hor = false;
        }
        if (all_vert || all_hor)
            throw CaseMismatch("oblique case requested but the trace is purely " +
                               std::string(all_vert ? "vertical" : "horizontal"));
    }

    Theorem31Residuals out;
    out.which = which;
    const ChartManifold& m = trace.manifold;
    for (std::size_t i = stride; i + stride < trace.size(); i += stride) {
        const Vec& p = trace.p[i];
        Mat PV = phi.vertical_projector(p);
        Mat PH = Mat::Identity(m.dim, m.dim) - PV;
        double r1 = 0.0, r2 = 0.0;
        if (which == GeodesicCase::Vertical) {
            Vec tuu = phi.tensor_T(p, trace.U[i], trace.U[i]).components;
            Vec du = trace.along_curve_derivative(trace.U, i);
            r1 = norm(m, p, tuu);
            r2 = norm(m, p, Vec(PV * du));
        } else if (which == GeodesicCase::Horizontal) {
            Vec ayy = phi.tensor_A(p, trace.Y[i], trace.Y[i]).components;
            Vec dy = trace.along_curve_derivative(trace.Y, i);
            r1 = norm(m, p, ayy);
            r2 = norm(m, p, Vec(PH * dy));
        } else {
            Vec dv = trace.along_curve_derivative(trace.v, i);
            r1 = norm(m, p, Vec(PV * dv));
            r2 = norm(m, p, Vec(PH * dv));
            Vec ayy = phi.tensor_A(p, trace.Y[i], trace.Y[i]).components;
            out.a_yy.push_back(norm(m, p, ayy));
        }
        out.t.push_back(trace.t[i]);
        out.r1.push_back(r1);
        out.r2.push_back(r2);
        out.max_r1 = std::max(out.max_r1, r1);
        out.max_r2 = std::max(out.max_r2, r2);
    }
    return out;
}

ResidualSeries eq3_expansion_check(const WarpedProduct& w, const GeodesicTrace& trace,
                                   std::size_t stride) {
    ResidualSeries out;
    const ChartManifold& m = trace.manifold;
    int m1 = w.base_dim(), m2 = w.fiber_dim();
    double dt = trace.t[1] - trace.t[0];

    for (std::size_t i = stride; i + stride < trace.size(); i += stride) {
        const Vec& p = trace.p[i];
        Vec p1 = w.base_point(p), p2 = w.fiber_point(p);
        Vec x1 = trace.v[i].head(m1), x2 = trace.v[i].tail(m2);

        // Left side: covariant acceleration along the curve on the product.
        Vec lhs = trace.along_curve_derivative(trace.v, i);

        // Factor-curve accelerations (the lifts of nabla^{M1}, nabla^{M2}).
        Vec x1dot = (trace.v[i + 1].head(m1) - trace.v[i - 1].head(m1)) / (2.0 * dt);
        Vec x2dot = (trace.v[i + 1].tail(m2) - trace.v[i - 1].tail(m2)) / (2.0 * dt);
        Vec acc1 = x1dot + christoffel(w.base(), p1).apply(x1, x1);
        Vec acc2 = x2dot + christoffel(w.fiber(), p2).apply(x2, x2);

        double f = w.warp()(p1);
        double x1f = 0.0;
        for (int k = 0; k < m1; ++k) x1f += x1[k] * w.warp().deriv(k, p1);
        double g22 = f * f * x2.dot(w.fiber().metric(p2) * x2);

        Vec rhs = w.lift(1, acc1) + 2.0 * (x1f / f) * w.lift(2, x2) - g22 * w.grad_ln_warp(p) +
                  w.lift(2, acc2);

        double r = norm(m, p, Vec(lhs - rhs));
        out.t.push_back(trace.t[i]);
        out.r.push_back(r);
        out.max_residual = std::max(out.max_residual, r);
    }
    return out;
}

}  // namespace wpmap
