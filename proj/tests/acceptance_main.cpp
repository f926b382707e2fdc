// Acceptance gate: one line per criterion, exit 0 only if all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wpmap/catalog.hpp"
#include "wpmap/clairaut.hpp"
#include "wpmap/curvature.hpp"
#include "wpmap/errors.hpp"
#include "wpmap/geodesic.hpp"
#include "wpmap/scenario.hpp"

using namespace wpmap;
namespace fs = std::filesystem;

namespace {

Vec pt(std::initializer_list<double> v) {
    Vec p(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

struct Gate {
    int failures = 0;

    void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

bool leq(double value, double bound, std::string& detail, const char* label) {
    if (value <= bound) return true;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s = %.3g exceeds %.3g", label, value, bound);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    return false;
}

bool near(double value, double target, double tol, std::string& detail, const char* label) {
    if (std::abs(value - target) <= tol) return true;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s = %.6g, expected %.6g (tol %.1g)", label, value, target,
                  tol);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    return false;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_timestamp(std::string text) {
    std::size_t pos = text.find("\"timestamp\"");
    if (pos == std::string::npos) return text;
    return text.erase(pos, text.find('\n', pos) - pos);
}

Vec safe_center(const std::string& name) {
    if (name == "polar2") return pt({2.0, 0.0});
    if (name == "sphere2") return pt({M_PI / 2, 1.0});
    if (name == "hyperbolic2") return pt({0.0, 2.0});
    if (name == "heisenberg3") return pt({0.0, 0.0, 0.0});
    if (name.rfind("interval", 0) == 0) return pt({0.5});
    ChartManifold m = catalog_manifold(name);
    return Vec::Zero(m.dim);
}

Vec warped_center(const std::string& name) {
    if (name == "spheremodel") return pt({M_PI / 2, 0.0});
    if (name == "h3model") return pt({0.0, 0.2, -0.1});
    return Vec::Zero(catalog_warped(name).dim());
}

}  // namespace

int main() {
    Gate gate;
    auto t_start = std::chrono::steady_clock::now();

    gate.criterion("connection-law lemma22 on product, spheremodel, h3model", [](std::string& d) {
        bool ok = true;
        for (const char* name : {"product", "spheremodel", "h3model"}) {
            std::mt19937_64 rng(101);
            WarpedProduct w = catalog_warped(name);
            WarpedProduct::Lemma22Report rep = w.verify_lemma22(200, rng);
            ok &= leq(rep.max_residual, 1e-4, d, name);
        }
        return ok;
    });

    gate.criterion("fundamental-tensor identity suite incl. flat-plane submersion",
                   [](std::string& d) {
        bool ok = true;
        std::mt19937_64 rng(102);
        std::vector<RiemannianMap> maps;
        std::vector<std::string> labels;
        for (const std::string& name : catalog_warped_names()) {
            WarpedProduct w = catalog_warped(name);
            maps.push_back(ProductRiemannianMap::builtin(w, "pi1").map());
            labels.push_back(name + "/pi1");
        }
        maps.push_back(heisenberg_submersion());
        labels.push_back("heisenberg");

        for (std::size_t k = 0; k < maps.size(); ++k) {
            const RiemannianMap& phi = maps[k];
            const ChartManifold& m = phi.source();
            for (int s = 0; s < 3; ++s) {
                Vec p = sample_point(m, rng);
                Mat pv = phi.vertical_projector(p), ph = phi.horizontal_projector(p);
                ok &= leq((pv + ph - Mat::Identity(m.dim, m.dim)).norm(), 1e-5, d,
                          (labels[k] + " projector sum").c_str());
                ok &= leq((pv * pv - pv).norm(), 1e-5, d,
                          (labels[k] + " projector idempotence").c_str());

                RiemannianMap::Frame fr = phi.frame(p);
                if (fr.vertical.cols() >= 1) {
                    Vec v1 = fr.vertical.col(0);
                    Vec v2 = fr.vertical.col(fr.vertical.cols() - 1);
                    Vec x1 = fr.horizontal.col(0);
                    TangentVector t12 = phi.tensor_T(p, v1, v2);
                    TangentVector t21 = phi.tensor_T(p, v2, v1);
                    ok &= leq((t12.components - t21.components).norm(), 1e-4, d,
                              (labels[k] + " T symmetry").c_str());
                    ok &= leq((pv * t12.components).norm(), 1e-4, d,
                              (labels[k] + " T output horizontal").c_str());
                    double skew = inner(m, p, phi.tensor_T(p, v1, v2).components, x1) +
                                  inner(m, p, phi.tensor_T(p, v1, x1).components, v2);
                    ok &= leq(std::abs(skew), 1e-4, d, (labels[k] + " T skew").c_str());
                }
                if (fr.horizontal.cols() >= 2) {
                    Vec x1 = fr.horizontal.col(0), x2 = fr.horizontal.col(1);
                    TangentVector a12 = phi.tensor_A(p, x1, x2);
                    TangentVector a21 = phi.tensor_A(p, x2, x1);
                    ok &= leq((a12.components + a21.components).norm(), 1e-4, d,
                              (labels[k] + " A antisymmetry").c_str());
                    ok &= leq((ph * a12.components).norm(), 1e-4, d,
                              (labels[k] + " A output vertical").c_str());
                }
                RiemannianMap::Lemma21Report l21 = phi.lemma21_decomposition_check(p, rng);
                ok &= leq(l21.identity_residual, 1e-5, d,
                          (labels[k] + " decomposition identity").c_str());
                ok &= leq(l21.basic_residual, 1e-4, d, (labels[k] + " basic field").c_str());
            }
        }

        // Classical invariant of the flat-plane submersion: |A(X,Y)| = 1/2 for
        // unit basic horizontal fields.
        RiemannianMap hs = heisenberg_submersion();
        Vec p0 = pt({0.0, 0.0, 0.0});
        VectorField bx = hs.basic_field(pt({1, 0}));
        VectorField by = hs.basic_field(pt({0, 1}));
        TangentVector a = hs.tensor_A(p0, bx(p0), by(p0));
        ok &= near(norm(hs.source(), p0, a.components), 0.5, 1e-4, d, "submersion A-value");
        return ok;
    });

    gate.criterion("geodesic engine: 80 launches, energy drift, 4th order, curve expansion",
                   [](std::string& d) {
        bool ok = true;
        std::mt19937_64 rng(103);
        std::vector<std::string> names = {"euclidean:2",  "polar2", "sphere2",       "hyperbolic2",
                                          "heisenberg3",  "line",   "interval(0,1)", "circle"};
        for (const std::string& name : names) {
            ChartManifold m = catalog_manifold(name);
            Vec c = safe_center(name);
            std::normal_distribution<double> nd(0.0, 1.0);
            double worst = 0.0;
            for (int s = 0; s < 10; ++s) {
                Vec v0(m.dim);
                for (int i = 0; i < m.dim; ++i) v0[i] = nd(rng);
                v0 *= 0.1 / std::max(v0.norm(), 1e-8);
                GeodesicTrace tr = integrate(m, c, v0, 5.0, 1e-3);
                for (std::size_t i = 0; i < tr.size(); i += 100) {
                    double b = inner(m, tr.p[i], tr.v[i], tr.v[i]);
                    worst = std::max(worst, std::abs(b - tr.b0) / tr.b0);
                }
            }
            ok &= leq(worst, 1e-6, d, (name + " rel speed drift").c_str());
        }

        ChartManifold h2 = catalog_manifold("hyperbolic2");
        auto endpoint_error = [&](double dt) {
            GeodesicTrace tr = integrate(h2, pt({0, 1}), pt({1, 0}), 1.0, dt);
            return (tr.p.back() - pt({std::tanh(1.0), 1.0 / std::cosh(1.0)})).norm();
        };
        double ratio = endpoint_error(0.05) / endpoint_error(0.025);
        if (ratio < 10.0 || ratio > 24.0) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "step-halving error ratio %.2f outside [10,24]",
                          ratio);
            d += buf;
            ok = false;
        }

        WarpedProduct sph = catalog_warped("spheremodel");
        GeodesicTrace wig = trace_curve(
            sph.manifold(),
            [](double t) { return Vec(pt({M_PI / 2 + 0.3 * std::sin(t), 0.8 * t})); },
            [](double t) { return Vec(pt({0.3 * std::cos(t), 0.8})); }, 0.0, 3.0, 1e-3);
        ok &= leq(eq3_expansion_check(sph, wig).max_residual, 1e-3, d,
                  "curve expansion residual");
        return ok;
    });

    gate.criterion("geodesic case conditions thm31 with latitude-circle control",
                   [](std::string& d) {
        bool ok = true;
        WarpedProduct sph = catalog_warped("spheremodel");
        ProductRiemannianMap pi1 = ProductRiemannianMap::builtin(sph, "pi1");

        GeodesicTrace eq = integrate(sph.manifold(), pt({M_PI / 2, 0}), pt({0, 1}), 10.0, 1e-3);
        decompose(pi1.map(), eq);
        Theorem31Residuals rv = theorem31_residuals(pi1.map(), eq, GeodesicCase::Vertical);
        ok &= leq(std::max(rv.max_r1, rv.max_r2), 1e-3, d, "vertical case");

        GeodesicTrace mer = integrate(sph.manifold(), pt({M_PI / 2, 0}), pt({1, 0}), 1.0, 1e-3);
        decompose(pi1.map(), mer);
        Theorem31Residuals rh = theorem31_residuals(pi1.map(), mer, GeodesicCase::Horizontal);
        ok &= leq(std::max(rh.max_r1, rh.max_r2), 1e-3, d, "horizontal case");

        GeodesicTrace obl = integrate(sph.manifold(), pt({M_PI / 2, 0}),
                                      pt({std::sqrt(0.5), std::sqrt(0.5)}), 5.0, 1e-3);
        decompose(pi1.map(), obl);
        Theorem31Residuals ro = theorem31_residuals(pi1.map(), obl, GeodesicCase::Oblique);
        ok &= leq(std::max(ro.max_r1, ro.max_r2), 1e-3, d, "oblique case");

        GeodesicTrace lat = trace_curve(
            sph.manifold(), [](double t) { return Vec(pt({M_PI / 4, t})); },
            [](double) { return Vec(pt({0, 1})); }, 0.0, 2.0, 1e-2);
        decompose(pi1.map(), lat);
        Theorem31Residuals rl = theorem31_residuals(pi1.map(), lat, GeodesicCase::Vertical);
        ok &= near(rl.max_r1, 0.5, 0.01, d, "latitude-circle |T(U,U)|");
        return ok;
    });

    gate.criterion("clairaut invariant: drift, turning latitude, umbilic test, negative control",
                   [](std::string& d) {
        bool ok = true;
        std::mt19937_64 rng(104);
        WarpedProduct sph = catalog_warped("spheremodel");
        ProductRiemannianMap pi1 = ProductRiemannianMap::builtin(sph, "pi1");
        ScalarField g = auto_clairaut_g(sph);

        std::vector<Launch> launches;
        for (int k = 0; k < 10; ++k) {
            double w0 = 0.55 + 0.1 * k;
            launches.push_back(
                {pt({M_PI / 2, 0}), pt({std::cos(w0), std::sin(w0)}), 10.0, 1e-3});
        }
        ClairautReport sweep = geodesic_sweep(pi1, g, launches, rng);
        ok &= (sweep.condition_verdict && sweep.drift_verdict && sweep.failed_runs == 0);
        ok &= leq(sweep.max_drift, 1e-4, d, "invariant rel drift");

        GeodesicTrace tr = integrate(sph.manifold(), pt({M_PI / 2, 0}),
                                     pt({std::cos(M_PI / 4), std::sin(M_PI / 4)}), 10.0, 1e-3);
        decompose(pi1.map(), tr);
        InvariantSeries inv = invariant_series(tr, g);
        std::size_t turn = 0;
        for (std::size_t i = 0; i < tr.size(); ++i)
            if (tr.omega[i] > tr.omega[turn]) turn = i;
        ok &= near(std::sin(tr.p[turn][0]), inv.initial, 1e-3, d, "turning latitude");

        ClairautReport usph = clairaut_condition_check(pi1, g, rng);
        ok &= leq(usph.umbilical_residual, 1e-4, d, "spheremodel umbilic residual");
        WarpedProduct h3 = catalog_warped("h3model");
        ClairautReport uh3 = clairaut_condition_check(
            ProductRiemannianMap::builtin(h3, "pi1"), auto_clairaut_g(h3), rng);
        ok &= leq(uh3.umbilical_residual, 1e-4, d, "h3model umbilic residual");

        ClairautReport neg = geodesic_sweep(pi1, ScalarField::parse("x1", 2), launches, rng);
        if (neg.condition_verdict || neg.drift_verdict || !neg.verdicts_agree) {
            d += "wrong-potential control did not fail both verdicts";
            ok = false;
        }
        Scenario nsc = parse_scenario_file(std::string(SCENARIO_DIR) +
                                           "/negative_control.scenario");
        RunResult nr = run_scenario(nsc, (fs::temp_directory_path() / "wpmap_acc_neg").string());
        if (nr.exit_code != 1) {
            d += "negative_control scenario exit code != 1";
            ok = false;
        }
        return ok;
    });

    gate.criterion("eqAT identity along geodesics of every catalog warped product",
                   [](std::string& d) {
        bool ok = true;
        for (const std::string& name : catalog_warped_names()) {
            WarpedProduct w = catalog_warped(name);
            ProductRiemannianMap pi1 = ProductRiemannianMap::builtin(w, "pi1");
            Vec p0 = warped_center(name);
            Vec v0 = Vec::Ones(w.dim());
            v0 *= 0.8 / std::sqrt(inner(w.manifold(), p0, v0, v0));
            GeodesicTrace tr = integrate(w.manifold(), p0, v0, 5.0, 1e-3);
            decompose(pi1.map(), tr);
            ok &= leq(eqAT_check(pi1.map(), tr).max_residual, 1e-3, d, name.c_str());
        }
        return ok;
    });

    gate.criterion("curvature oracle: model values, tensor symmetries, first Bianchi",
                   [](std::string& d) {
        bool ok = true;
        std::mt19937_64 rng(105);
        ChartManifold sph = catalog_manifold("sphere2");
        ChartManifold hyp = catalog_manifold("hyperbolic2");
        for (int s = 0; s < 5; ++s) {
            ok &= near(sectional(sph, sample_point(sph, rng), pt({1, 0}), pt({0, 1})), 1.0, 1e-4,
                       d, "sphere sectional");
            ok &= near(sectional(hyp, sample_point(hyp, rng), pt({1, 0}), pt({0, 1})), -1.0,
                       1e-4, d, "hyperbolic sectional");
        }
        WarpedProduct wh3 = catalog_warped("h3model");
        const ChartManifold& h3 = wh3.manifold();
        for (int s = 0; s < 5; ++s) {
            Vec p = sample_point(h3, rng);
            Vec X = Vec::Random(3), Y = Vec::Random(3);
            ok &= near(sectional(h3, p, X, Y), -1.0, 1e-3, d, "space-form sectional");
        }
        for (std::string name : catalog_names()) {
            if (name == "euclidean:<n>") name = "euclidean:2";
            if (name == "interval(a,b)") name = "interval(0,1)";
            ChartManifold m = catalog_manifold(name);
            for (int s = 0; s < 3; ++s) {
                SymmetryReport rep = bianchi_and_symmetry_check(m, sample_point(m, rng));
                ok &= leq(rep.max_residual, 1e-4, d, (name + " symmetry/Bianchi").c_str());
            }
        }
        return ok;
    });

    gate.criterion("curvature laws thm33/thm34 under one calibrated sign convention",
                   [](std::string& d) {
        bool ok = true;
        WarpedProduct h3 = catalog_warped("h3model");
        CurvatureContext ctx{h3, ProductRiemannianMap::builtin(h3, "pi1"), auto_clairaut_g(h3)};
        Vec p = pt({0.3, 0.2, -0.1});
        RiemannianMap::Frame fr = ctx.phi.map().frame(p);
        Vec a = fr.vertical.col(0);
        LaplacianSign sign = calibrate_laplacian(ctx, p, a, a);

        ok &= leq(thm33_item(2, ctx, p, a, a, sign).residual, 1e-3, d, "thm33:2 h3");
        ok &= leq(thm34_item(2, ctx, p, fr.vertical.col(0), fr.vertical.col(1)).residual, 1e-3,
                  d, "thm34:2 h3");

        WarpedProduct cosh_w = catalog_warped("coshmodel");
        CurvatureContext cctx{cosh_w, ProductRiemannianMap::builtin(cosh_w, "pi1"),
                              auto_clairaut_g(cosh_w)};
        Vec cp = pt({0.4, -0.2});
        Vec ca = cctx.phi.map().frame(cp).vertical.col(0);
        ok &= leq(thm33_item(2, cctx, cp, ca, ca, sign).residual, 1e-3, d,
                  "thm33:2 coshmodel same sign");

        CurvatureContext pi2{h3, ProductRiemannianMap::builtin(h3, "pi2"), auto_clairaut_g(h3)};
        RiemannianMap::Frame f2 = pi2.phi.map().frame(p);
        ok &= leq(thm34_item(6, pi2, p, f2.vertical.col(0), f2.horizontal.col(0)).residual,
                  1e-3, d, "thm34:6 h3/pi2");
        ok &= leq(thm34_item(5, pi2, p, f2.horizontal.col(0), f2.horizontal.col(1)).residual,
                  1e-3, d, "thm34:5 h3/pi2");

        // Orientation-reported items: one orientation must fit and its stamp
        // must not flip between points.
        std::vector<std::string> stamps1;
        std::mt19937_64 rng(106);
        for (int s = 0; s < 3; ++s) {
            Vec q = sample_point(h3.manifold(), rng);
            RiemannianMap::Frame fq = ctx.phi.map().frame(q);
            CurvatureReport r1 = thm34_item(1, ctx, q, fq.vertical.col(0), fq.vertical.col(1));
            ok &= leq(std::min(r1.residual, r1.residual_alt), 1e-3, d, "thm34:1 best fit");
            if (stamps1.empty())
                stamps1 = r1.stamps;
            else if (stamps1 != r1.stamps) {
                d += "thm34:1 orientation stamp flipped between points";
                ok = false;
            }
        }
        CurvatureReport r4 = thm34_item(4, ctx, p, fr.vertical.col(0), fr.horizontal.col(0));
        ok &= leq(std::min(r4.residual, r4.residual_alt), 1e-3, d, "thm34:4 best fit");

        WarpedProduct flat = catalog_warped("product");
        CurvatureContext fid{flat, ProductRiemannianMap::builtin(flat, "identity"),
                             auto_clairaut_g(flat)};
        RiemannianMap::Frame ff = fid.phi.map().frame(pt({0.4, 0.1}));
        CurvatureReport r3 =
            thm34_item(3, fid, pt({0.4, 0.1}), ff.horizontal.col(0), ff.horizontal.col(1));
        ok &= r3.computable;
        ok &= leq(std::min(r3.residual, r3.has_alt ? r3.residual_alt : r3.residual), 1e-6, d,
                  "thm34:3 flat identity");

        CurvatureReport t1 = thm33_item(1, ctx, p, a, a, sign);
        CurvatureReport t3 = thm33_item(3, ctx, p, fr.horizontal.col(0), fr.horizontal.col(0),
                                        sign);
        if (!t1.computable || !t3.computable || !std::isfinite(t1.closed_form) ||
            !std::isfinite(t3.closed_form)) {
            d += "termwise reports thm33:1/thm33:3 not computable";
            ok = false;
        }
        return ok;
    });

    gate.criterion("deterministic reruns and wall-clock budget", [&](std::string& d) {
        bool ok = true;
        fs::path out = fs::temp_directory_path() / "wpmap_acc_det";
        Scenario sc =
            parse_scenario_file(std::string(SCENARIO_DIR) + "/product_basic.scenario");
        RunResult a = run_scenario(sc, (out / "a").string());
        RunResult b = run_scenario(sc, (out / "b").string());
        if (without_timestamp(slurp(a.report_path)) != without_timestamp(slurp(b.report_path))) {
            d += "report.json differs between identical runs";
            ok = false;
        }
        if (a.trace_paths.size() != b.trace_paths.size()) {
            d += "trace count differs";
            ok = false;
        } else {
            for (std::size_t i = 0; i < a.trace_paths.size(); ++i)
                if (slurp(a.trace_paths[i]) != slurp(b.trace_paths[i])) {
                    d += "trace CSV differs between identical runs";
                    ok = false;
                    break;
                }
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                             .count();
        ok &= leq(elapsed, 120.0, d, "total wall-clock seconds");
        return ok;
    });

    std::printf("%d/9 criteria passed\n", 9 - gate.failures);
    return gate.failures == 0 ? 0 : 1;
}
