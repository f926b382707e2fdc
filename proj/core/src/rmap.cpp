#include "wpmap/rmap.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "wpmap/catalog.hpp"
#include "wpmap/errors.hpp"

namespace wpmap {

namespace {
Vec box_center(const ChartManifold& m) {
    Box b = m.domain.sampling_box();
    return 0.5 * (b.lo + b.hi);
}
}  // namespace

RiemannianMap RiemannianMap::from_fn(ChartManifold source, ChartManifold target, MapFn fn,
                                     std::string name) {
    RiemannianMap r;
    r.source_ = std::move(source);
    r.target_ = std::move(target);
    r.fn_ = std::move(fn);
    r.name_ = std::move(name);
    return r;
}

RiemannianMap RiemannianMap::from_exprs(ChartManifold source, ChartManifold target,
                                        const std::vector<Expr>& components, std::string name) {
    if (static_cast<int>(components.size()) != target.dim)
        throw ConfigError("map '" + name + "' has " + std::to_string(components.size()) +
                          " components, target dim is " + std::to_string(target.dim));
    auto comps = components;
    MapFn fn = [comps](const Vec& p) {
        Vec out(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i) out[i] = comps[i].eval(p);
        return out;
    };
    return from_fn(std::move(source), std::move(target), std::move(fn), std::move(name));
}

Mat RiemannianMap::jacobian(const Vec& p) const {
    int n = source_.dim, nt = target_.dim;
    Mat J(nt, n);
    for (int i = 0; i < n; ++i) {
        double h = fd_step(p[i], source_.fd.base_step);
        Vec q = p;
        q[i] = p[i] + h;
        Vec fp = fn_(q);
        q[i] = p[i] - h;
        Vec fm = fn_(q);
        J.col(i) = (fp - fm) / (2.0 * h);
    }
    return J;
}

TangentVector RiemannianMap::pushforward(const Vec& p, const Vec& v) const {
    require_in_domain(source_, p);
    return {apply(p), jacobian(p) * v};
}

Mat RiemannianMap::null_basis(const Vec& p) const {
    Mat J = jacobian(p);
    Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullV);
    Vec sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
    int n = source_.dim;
    if (smax < 1e-12) return Mat::Identity(n, n);  // rank 0: everything vertical
    double thr = 1e-7 * smax;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (std::abs(sv[i] - thr) < 1e-8)
            throw RankDrop(name_ + ": singular value " + std::to_string(sv[i]) +
                           " within 1e-8 of threshold " + std::to_string(thr));
        if (sv[i] > thr) ++rank;
    }
    return svd.matrixV().rightCols(n - rank);
}

Mat RiemannianMap::vertical_projector(const Vec& p) const {
    Mat V = null_basis(p);
    int n = source_.dim;
    if (V.cols() == 0) return Mat::Zero(n, n);
    Mat G = source_.metric(p);
    Mat M = V.transpose() * G * V;
    return V * M.llt().solve(V.transpose() * G);
}

Mat RiemannianMap::horizontal_projector(const Vec& p) const {
    return Mat::Identity(source_.dim, source_.dim) - vertical_projector(p);
}

RiemannianMap::Frame RiemannianMap::frame(const Vec& p) const {
    Frame f;
    f.point = p;
    Mat V = null_basis(p);
    f.vertical = orthonormalize(source_, p, V);
    Mat PH = Mat::Identity(source_.dim, source_.dim) - vertical_projector(p);
    f.horizontal = orthonormalize(source_, p, PH);
    return f;
}

TangentVector RiemannianMap::tensor_T(const Vec& p, const Vec& E1, const Vec& E2) const {
    Mat PV = vertical_projector(p);
    Mat PH = Mat::Identity(source_.dim, source_.dim) - PV;
    Vec v = PV * E1;
    VectorField vert_ext = [this, E2](const Vec& x) { return Vec(vertical_projector(x) * E2); };
    VectorField hor_ext = [this, E2](const Vec& x) { return Vec(horizontal_projector(x) * E2); };
    Vec a = covariant_derivative_dir(source_, v, vert_ext, p, source_.fd.outer_step).components;
    Vec b = covariant_derivative_dir(source_, v, hor_ext, p, source_.fd.outer_step).components;
    return {p, PH * a + PV * b};
}

TangentVector RiemannianMap::tensor_A(const Vec& p, const Vec& E1, const Vec& E2) const {
    Mat PV = vertical_projector(p);
    Mat PH = Mat::Identity(source_.dim, source_.dim) - PV;
    Vec h = PH * E1;
    VectorField vert_ext = [this, E2](const Vec& x) { return Vec(vertical_projector(x) * E2); };
    VectorField hor_ext = [this, E2](const Vec& x) { return Vec(horizontal_projector(x) * E2); };
    Vec a = covariant_derivative_dir(source_, h, vert_ext, p, source_.fd.outer_step).components;
    Vec b = covariant_derivative_dir(source_, h, hor_ext, p, source_.fd.outer_step).components;
    return {p, PH * a + PV * b};
}

RiemannianMap::Lemma21Report RiemannianMap::lemma21_decomposition_check(
    const Vec& p, std::mt19937_64& rng) const {
    Lemma21Report rep;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int n = source_.dim;
    Mat PV = vertical_projector(p);
    Mat PH = Mat::Identity(n, n) - PV;

    auto rand_vec = [&] {
        Vec c(n);
        for (int i = 0; i < n; ++i) c[i] = u(rng);
        return c;
    };
    Vec cv = rand_vec(), cw = rand_vec(), cx = rand_vec(), cy = rand_vec();
    VectorField Wf = [this, cw](const Vec& x) { return Vec(vertical_projector(x) * cw); };
    VectorField Xf = [this, cx](const Vec& x) { return Vec(horizontal_projector(x) * cx); };
    VectorField Yf = [this, cy](const Vec& x) { return Vec(horizontal_projector(x) * cy); };
    Vec Vp = PV * cv, Xp = Xf(p);

    auto T_of = [&](const Vec& dir, const VectorField& F) {
        VectorField vert = [this, &F](const Vec& x) { return Vec(vertical_projector(x) * F(x)); };
        VectorField hor = [this, &F](const Vec& x) { return Vec(horizontal_projector(x) * F(x)); };
        Vec a = covariant_derivative_dir(source_, dir, vert, p, source_.fd.outer_step).components;
        Vec b = covariant_derivative_dir(source_, dir, hor, p, source_.fd.outer_step).components;
        return Vec(PH * a + PV * b);
    };

    // nabla_V W = T_V W + hat-nabla_V W
    Vec dVW = covariant_derivative_dir(source_, Vp, Wf, p, source_.fd.outer_step).components;
    rep.identity_residual = std::max(rep.identity_residual,
                                     (dVW - (T_of(Vp, Wf) + PV * dVW)).cwiseAbs().maxCoeff());
    // nabla_V X = H nabla_V X + T_V X
    Vec dVX = covariant_derivative_dir(source_, Vp, Xf, p, source_.fd.outer_step).components;
    rep.identity_residual = std::max(rep.identity_residual,
                                     (dVX - (PH * dVX + T_of(Vp, Xf))).cwiseAbs().maxCoeff());
    // nabla_X V = A_X V + V nabla_X V  (A from the shared field)
    VectorField Vf = [this, cv](const Vec& x) { return Vec(vertical_projector(x) * cv); };
    auto A_of = [&](const Vec& dir, const VectorField& F) {
        VectorField vert = [this, &F](const Vec& x) { return Vec(vertical_projector(x) * F(x)); };
        VectorField hor = [this, &F](const Vec& x) { return Vec(horizontal_projector(x) * F(x)); };
        Vec a = covariant_derivative_dir(source_, dir, vert, p, source_.fd.outer_step).components;
        Vec b = covariant_derivative_dir(source_, dir, hor, p, source_.fd.outer_step).components;
        return Vec(PH * a + PV * b);
    };
    Vec dXV = covariant_derivative_dir(source_, Xp, Vf, p, source_.fd.outer_step).components;
    rep.identity_residual = std::max(rep.identity_residual,
                                     (dXV - (A_of(Xp, Vf) + PV * dXV)).cwiseAbs().maxCoeff());
    // nabla_X Y = H nabla_X Y + A_X Y
    Vec dXY = covariant_derivative_dir(source_, Xp, Yf, p, source_.fd.outer_step).components;
    rep.identity_residual = std::max(rep.identity_residual,
                                     (dXY - (PH * dXY + A_of(Xp, Yf))).cwiseAbs().maxCoeff());

    // Basic-field property H nabla_V X = A_X V, for the horizontal lift of a
    // random target vector (needs positive horizontal dimension).
    Frame fr = frame(p);
    if (fr.horizontal.cols() > 0 && fr.vertical.cols() > 0) {
        Vec wt(target_.dim);
        for (int i = 0; i < target_.dim; ++i) wt[i] = u(rng);
        Vec wproj = jacobian(p) * fr.horizontal.col(0);
        if (wt.norm() < 1e-12) wt = wproj;
        VectorField Xb = basic_field(wt);
        Vec lhs = PH * covariant_derivative_dir(source_, Vp, Xb, p, source_.fd.outer_step).components;
        Vec rhs = tensor_A(p, Xb(p), Vp).components;
        rep.basic_residual = (lhs - rhs).cwiseAbs().maxCoeff();
    }
    return rep;
}

TangentVector RiemannianMap::fiber_mean_curvature(const Vec& p) const {
    Frame fr = frame(p);
    int k = static_cast<int>(fr.vertical.cols());
    if (k == 0) throw NoFibers(name_ + ": dim ker phi_* = 0 at this point");
    Vec H = Vec::Zero(source_.dim);
    for (int i = 0; i < k; ++i)
        H += tensor_T(p, fr.vertical.col(i), fr.vertical.col(i)).components;
    return {p, H / k};
}

double RiemannianMap::umbilical_residual(const Vec& p) const {
    Frame fr = frame(p);
    int k = static_cast<int>(fr.vertical.cols());
    if (k == 0) throw NoFibers(name_ + ": dim ker phi_* = 0 at this point");
    Vec H = fiber_mean_curvature(p).components;
    double res = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            Vec t = tensor_T(p, fr.vertical.col(i), fr.vertical.col(j)).components;
            double gij = i == j ? 1.0 : 0.0;  // frame is g-orthonormal
            res = std::max(res, norm(source_, p, Vec(t - gij * H)));
        }
    return res;
}

Vec RiemannianMap::second_fundamental_form(const Vec& p, const Vec& X, const Vec& Y) const {
    // W(x) = J(x) Y, a field along phi; pullback connection along X corrected
    // with target Christoffels at phi(p).
    Vec Wp = jacobian(p) * Y;
    Vec dW = Vec::Zero(target_.dim);
    for (int i = 0; i < source_.dim; ++i) {
        if (X[i] == 0.0) continue;
        double h = fd_step(p[i], source_.fd.outer_step);
        Vec q = p;
        q[i] = p[i] + h;
        Vec wp = jacobian(q) * Y;
        q[i] = p[i] - h;
        Vec wm = jacobian(q) * Y;
        dW += X[i] * (wp - wm) / (2.0 * h);
    }
    Christoffel cn = christoffel(target_, apply(p));
    Vec pfX = jacobian(p) * X;
    Vec pullback = dW + cn.apply(pfX, Wp);
    // phi_*(nabla^M_X Ytilde) for the constant-component extension of Y.
    Christoffel cm = christoffel(source_, p);
    Vec nXY = cm.apply(X, Y);
    return pullback - jacobian(p) * nXY;
}

Vec RiemannianMap::horizontal_tension(const Vec& p) const {
    Frame fr = frame(p);
    Vec tau = Vec::Zero(target_.dim);
    for (int a = 0; a < fr.horizontal.cols(); ++a)
        tau += second_fundamental_form(p, fr.horizontal.col(a), fr.horizontal.col(a));
    return tau;
}

double RiemannianMap::isometry_residual(const Vec& p) const {
    Frame fr = frame(p);
    if (fr.horizontal.cols() == 0) return 0.0;
    Mat J = jacobian(p);
    Mat gn = target_.metric(apply(p));
    Mat pushed = fr.horizontal.transpose() * J.transpose() * gn * J * fr.horizontal;
    Mat I = Mat::Identity(fr.horizontal.cols(), fr.horizontal.cols());
    return (pushed - I).cwiseAbs().maxCoeff();
}

VectorField RiemannianMap::basic_field(const Vec& target_vec) const {
    const RiemannianMap* self = this;
    Vec w = target_vec;
    return [self, w](const Vec& x) {
        Mat J = self->jacobian(x);
        Mat JJt = J * J.transpose();
        Vec pre = J.transpose() * JJt.ldlt().solve(w);
        return Vec(self->horizontal_projector(x) * pre);
    };
}

ProductRiemannianMap ProductRiemannianMap::from_exprs(WarpedProduct source, WarpedProduct target,
                                                      const std::vector<std::string>& phi1,
                                                      const std::vector<std::string>& phi2) {
    int m1 = source.base_dim(), m2 = source.fiber_dim();
    int n1 = target.base_dim(), n2 = target.fiber_dim();
    if (static_cast<int>(phi1.size()) != n1 || static_cast<int>(phi2.size()) != n2)
        throw ConfigError("factor map arity mismatch: phi1 needs " + std::to_string(n1) +
                          " components, phi2 needs " + std::to_string(n2));
    std::vector<Expr> comps;
    for (const auto& s : phi1) comps.push_back(Expr::parse(s, m1 + m2));
    for (const auto& s : phi2) comps.push_back(Expr::parse(s, m1 + m2));

    // Factor structure: phi1 may use only x1..xm1, phi2 only x(m1+1)..x(m1+m2).
    std::mt19937_64 rng(0x70726f64u);
    for (int trial = 0; trial < 5; ++trial) {
        Vec p = sample_point(source.manifold(), rng);
        for (int j = 0; j < n1; ++j)
            for (int i = m1; i < m1 + m2; ++i)
                if (std::abs(comps[j].deriv(i, p)) > 1e-8)
                    throw ConfigError("phi1 component " + std::to_string(j + 1) +
                                      " depends on fiber coordinate x" + std::to_string(i + 1));
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < m1; ++i)
                if (std::abs(comps[n1 + j].deriv(i, p)) > 1e-8)
                    throw ConfigError("phi2 component " + std::to_string(j + 1) +
                                      " depends on base coordinate x" + std::to_string(i + 1));
    }

    RiemannianMap whole = RiemannianMap::from_exprs(source.manifold(), target.manifold(), comps,
                                                    "phi1 x phi2");
    Vec pad2 = box_center(source.fiber());
    Vec pad1 = box_center(source.base());
    std::vector<Expr> c1(comps.begin(), comps.begin() + n1);
    std::vector<Expr> c2(comps.begin() + n1, comps.end());
    MapFn f1 = [c1, pad2, m1, m2](const Vec& p1) {
        Vec p(m1 + m2);
        p << p1, pad2;
        Vec out(c1.size());
        for (std::size_t i = 0; i < c1.size(); ++i) out[i] = c1[i].eval(p);
        return out;
    };
    MapFn f2 = [c2, pad1, m1, m2](const Vec& p2) {
        Vec p(m1 + m2);
        p << pad1, p2;
        Vec out(c2.size());
        for (std::size_t i = 0; i < c2.size(); ++i) out[i] = c2[i].eval(p);
        return out;
    };
    RiemannianMap phi1m = RiemannianMap::from_fn(source.base(), target.base(), f1, "phi1");
    RiemannianMap phi2m = RiemannianMap::from_fn(source.fiber(), target.fiber(), f2, "phi2");
    return ProductRiemannianMap(std::move(source), std::move(target), std::move(whole),
                                std::move(phi1m), std::move(phi2m));
}

ProductRiemannianMap ProductRiemannianMap::builtin(const WarpedProduct& source,
                                                   const std::string& which) {
    ScalarField one([](const Vec&) { return 1.0; }, "1");
    if (which == "identity") {
        MapFn id = [](const Vec& p) { return p; };
        RiemannianMap whole =
            RiemannianMap::from_fn(source.manifold(), source.manifold(), id, "identity");
        RiemannianMap f1 = RiemannianMap::from_fn(source.base(), source.base(), id, "identity1");
        RiemannianMap f2 = RiemannianMap::from_fn(source.fiber(), source.fiber(), id, "identity2");
        return ProductRiemannianMap(source, source, whole, f1, f2);
    }
    if (which == "pi1") {
        // phi1 = id on the base, phi2 collapses the fiber to its chart center.
        WarpedProduct target = WarpedProduct::build(source.base(), source.fiber(), one);
        int m1 = source.base_dim(), m2 = source.fiber_dim();
        Vec c2 = box_center(source.fiber());
        MapFn fn = [m1, m2, c2](const Vec& p) {
            Vec out(m1 + m2);
            out << p.head(m1), c2;
            return out;
        };
        RiemannianMap whole =
            RiemannianMap::from_fn(source.manifold(), target.manifold(), fn, "pi1");
        MapFn id = [](const Vec& p) { return p; };
        MapFn cst = [c2](const Vec&) { return c2; };
        RiemannianMap f1 = RiemannianMap::from_fn(source.base(), target.base(), id, "pi1.phi1");
        RiemannianMap f2 = RiemannianMap::from_fn(source.fiber(), target.fiber(), cst, "pi1.phi2");
        return ProductRiemannianMap(source, target, whole, f1, f2);
    }
    if (which == "pi2") {
        WarpedProduct target = WarpedProduct::build(source.base(), source.fiber(), one);
        int m1 = source.base_dim(), m2 = source.fiber_dim();
        Vec c1 = box_center(source.base());
        MapFn fn = [m1, m2, c1](const Vec& p) {
            Vec out(m1 + m2);
            out << c1, p.tail(m2);
            return out;
        };
        RiemannianMap whole =
            RiemannianMap::from_fn(source.manifold(), target.manifold(), fn, "pi2");
        MapFn id = [](const Vec& p) { return p; };
        MapFn cst = [c1](const Vec&) { return c1; };
        RiemannianMap f1 = RiemannianMap::from_fn(source.base(), target.base(), cst, "pi2.phi1");
        RiemannianMap f2 = RiemannianMap::from_fn(source.fiber(), target.fiber(), id, "pi2.phi2");
        return ProductRiemannianMap(source, target, whole, f1, f2);
    }
    throw ConfigError("unknown builtin map '" + which + "' (pi1, pi2, identity)");
}

RiemannianMap heisenberg_submersion() {
    MapFn fn = [](const Vec& p) { return Vec(p.head(2)); };
    return RiemannianMap::from_fn(catalog_manifold("heisenberg3"), catalog_manifold("euclidean:2"),
                                  fn, "heisenberg_submersion");
}

}  // namespace wpmap
