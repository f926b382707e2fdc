#include "wpmap/manifold.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wpmap/errors.hpp"

namespace wpmap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string point_str(const Vec& p) {
    std::ostringstream os;
    os << "(" << p.transpose() << ")";
    return os.str();
}
}  // namespace

Box Box::unbounded(int dim) {
    Box b;
    b.lo = Vec::Constant(dim, -kInf);
    b.hi = Vec::Constant(dim, kInf);
    return b;
}

Box Box::cube(int dim, double a, double b) {
    Box box;
    box.lo = Vec::Constant(dim, a);
    box.hi = Vec::Constant(dim, b);
    return box;
}

bool Box::contains(const Vec& p, double margin) const {
    if (p.size() != lo.size()) return false;
    for (int i = 0; i < p.size(); ++i)
        if (!(p[i] > lo[i] + margin && p[i] < hi[i] - margin)) return false;
    return true;
}

Box Box::sampling_box(double clip, double margin) const {
    Box b;
    b.lo = lo;
    b.hi = hi;
    for (int i = 0; i < lo.size(); ++i) {
        b.lo[i] = std::max(lo[i], -clip);
        b.hi[i] = std::min(hi[i], clip);
        double w = b.hi[i] - b.lo[i];
        b.lo[i] += margin * w;
        b.hi[i] -= margin * w;
    }
    return b;
}

void require_in_domain(const ChartManifold& m, const Vec& p, double margin) {
    if (!m.domain.contains(p, margin))
        throw OutOfDomain(m.name + " at " + point_str(p));
}

Mat eval_metric(const ChartManifold& m, const Vec& p) {
    require_in_domain(m, p);
    Mat g = m.metric(p);
    double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw SingularMetric(m.name + ": metric asymmetry " + std::to_string(asym));
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw SingularMetric(m.name + ": non-positive eigenvalue at " + point_str(p));
    return g;
}

Mat metric_inverse(const ChartManifold& m, const Vec& p) {
    Mat g = m.metric(p);
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
        throw SingularMetric(m.name + ": inverse failed at " + point_str(p));
    return llt.solve(Mat::Identity(m.dim, m.dim));
}

Vec Christoffel::apply(const Vec& x, const Vec& y) const {
    int n = static_cast<int>(gamma.size());
    Vec out(n);
    for (int k = 0; k < n; ++k) out[k] = x.dot(gamma[k] * y);
    return out;
}

Christoffel christoffel(const ChartManifold& m, const Vec& p) {
    require_in_domain(m, p);
    int n = m.dim;
    // Stencil safety.
    for (int l = 0; l < n; ++l) {
        double h = fd_step(p[l], m.fd.base_step);
        Vec q = p;
        q[l] = p[l] + h;
        if (!m.domain.contains(q)) throw OutOfDomain(m.name + ": stencil at " + point_str(p));
        q[l] = p[l] - h;
        if (!m.domain.contains(q)) throw OutOfDomain(m.name + ": stencil at " + point_str(p));
    }
    Mat ginv = metric_inverse(m, p);
    std::vector<Mat> dg(n);
    for (int l = 0; l < n; ++l) {
        double h = fd_step(p[l], m.fd.base_step);
        Vec q = p;
        q[l] = p[l] + h;
        Mat gp = m.metric(q);
        q[l] = p[l] - h;
        Mat gm = m.metric(q);
        dg[l] = (gp - gm) / (2.0 * h);
    }
    Christoffel c;
    c.gamma.assign(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                c.gamma[k](i, j) = 0.5 * s;
                c.gamma[k](j, i) = c.gamma[k](i, j);
            }
    return c;
}

TangentVector covariant_derivative_dir(const ChartManifold& m, const Vec& Xp,
                                       const VectorField& Y, const Vec& p, double step_scale) {
    require_in_domain(m, p);
    int n = m.dim;
    double scale = step_scale > 0.0 ? step_scale : m.fd.base_step;
    Christoffel c = christoffel(m, p);
    Vec Yp = Y(p);
    Vec out = c.apply(Xp, Yp);
    for (int i = 0; i < n; ++i) {
        if (Xp[i] == 0.0) continue;
        double h = fd_step(p[i], scale);
        Vec q = p;
        q[i] = p[i] + h;
        Vec yp = Y(q);
        q[i] = p[i] - h;
        Vec ym = Y(q);
        out += Xp[i] * (yp - ym) / (2.0 * h);
    }
    return {p, out};
}

TangentVector covariant_derivative(const ChartManifold& m, const VectorField& X,
                                   const VectorField& Y, const Vec& p) {
    return covariant_derivative_dir(m, X(p), Y, p);
}

TangentVector gradient(const ChartManifold& m, const ScalarField& h, const Vec& p) {
    require_in_domain(m, p);
    Mat ginv = metric_inverse(m, p);
    Vec dh(m.dim);
    for (int i = 0; i < m.dim; ++i) dh[i] = h.deriv(i, p);
    return {p, ginv * dh};
}

double hessian(const ChartManifold& m, const ScalarField& h, const Vec& X, const Vec& Y,
               const Vec& p) {
    require_in_domain(m, p);
    // Y(h) as a scalar field of the base point, differentiated along X with the
    // outer step (its values are already finite-difference results).
    auto Yh = [&](const Vec& q) {
        double s = 0.0;
        for (int i = 0; i < m.dim; ++i) s += Y[i] * h.deriv(i, q);
        return s;
    };
    double xyh = 0.0;
    for (int i = 0; i < m.dim; ++i) {
        if (X[i] == 0.0) continue;
        double hs = fd_step(p[i], m.fd.outer_step);
        Vec q = p;
        q[i] = p[i] + hs;
        double fp = Yh(q);
        q[i] = p[i] - hs;
        double fm = Yh(q);
        xyh += X[i] * (fp - fm) / (2.0 * hs);
    }
    Christoffel c = christoffel(m, p);
    Vec nxy = c.apply(X, Y);
    double corr = 0.0;
    for (int i = 0; i < m.dim; ++i) corr += nxy[i] * h.deriv(i, p);
    return xyh - corr;
}

double divergence(const ChartManifold& m, const VectorField& X, const Vec& p) {
    require_in_domain(m, p);
    // trace of k -> nabla_{e_k} X in the coordinate basis: d_k X^k + Gamma^k_{ki} X^i.
    Christoffel c = christoffel(m, p);
    Vec Xp = X(p);
    double s = 0.0;
    for (int k = 0; k < m.dim; ++k) {
        double h = fd_step(p[k], m.fd.outer_step);
        Vec q = p;
        q[k] = p[k] + h;
        double fp = X(q)[k];
        q[k] = p[k] - h;
        double fm = X(q)[k];
        s += (fp - fm) / (2.0 * h);
        for (int i = 0; i < m.dim; ++i) s += c.gamma[k](k, i) * Xp[i];
    }
    return s;
}

double laplacian(const ChartManifold& m, const ScalarField& h, const Vec& p, LaplacianSign sign) {
    VectorField grad = [&m, &h](const Vec& q) { return gradient(m, h, q).components; };
    double d = divergence(m, grad, p);
    return sign == LaplacianSign::Plus ? d : -d;
}

Vec lie_bracket(const ChartManifold& m, const VectorField& X, const VectorField& Y, const Vec& p) {
    int n = m.dim;
    Vec Xp = X(p), Yp = Y(p);
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        double h = fd_step(p[i], m.fd.base_step);
        Vec q = p;
        q[i] = p[i] + h;
        Vec yp = Y(q), xp = X(q);
        q[i] = p[i] - h;
        Vec ym = Y(q), xm = X(q);
        out += Xp[i] * (yp - ym) / (2.0 * h) - Yp[i] * (xp - xm) / (2.0 * h);
    }
    return out;
}

double inner(const ChartManifold& m, const Vec& p, const Vec& u, const Vec& v) {
    return u.dot(m.metric(p) * v);
}

double norm(const ChartManifold& m, const Vec& p, const Vec& u) {
    return std::sqrt(std::max(0.0, inner(m, p, u, u)));
}

Mat orthonormalize(const ChartManifold& m, const Vec& p, const Mat& columns) {
    Mat g = m.metric(p);
    Mat out(columns.rows(), columns.cols());
    int k = 0;
    for (int c = 0; c < columns.cols(); ++c) {
        Vec v = columns.col(c);
        for (int j = 0; j < k; ++j) v -= out.col(j).dot(g * v) * out.col(j);
        double n2 = v.dot(g * v);
        if (n2 <= 1e-20) continue;  // dependent column
        out.col(k++) = v / std::sqrt(n2);
    }
    return out.leftCols(k);
}

Vec sample_point(const ChartManifold& m, std::mt19937_64& rng) {
    Box b = m.domain.sampling_box();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec p(m.dim);
    for (int i = 0; i < m.dim; ++i) p[i] = b.lo[i] + u(rng) * (b.hi[i] - b.lo[i]);
    return p;
}

VectorField random_polynomial_field(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // components c0 + sum c1_j x_j + sum c2_j x_j^2
    Mat c1(dim, dim), c2(dim, dim);
    Vec c0(dim);
    for (int i = 0; i < dim; ++i) {
        c0[i] = u(rng);
        for (int j = 0; j < dim; ++j) {
            c1(i, j) = u(rng);
            c2(i, j) = 0.5 * u(rng);
        }
    }
    return [c0, c1, c2, dim](const Vec& p) {
        Vec out = c0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) out[i] += c1(i, j) * p[j] + c2(i, j) * p[j] * p[j];
        return out;
    };
}

}  // namespace wpmap
