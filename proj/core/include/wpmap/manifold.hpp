#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wpmap/expr.hpp"

namespace wpmap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Axis-aligned open box in chart coordinates. Infinite extents allowed.
struct Box {
    Vec lo, hi;

    static Box unbounded(int dim);
    static Box cube(int dim, double a, double b);

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& p, double margin = 0.0) const;
    // Bounded sub-box used for random sampling (clips infinite extents).
    Box sampling_box(double clip = 2.0, double margin = 0.05) const;
};

struct TangentVector {
    Vec base;
    Vec components;
};

using MetricFn = std::function<Mat(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;

// Finite-difference configuration. base_step differentiates closed-form data
// (metric entries, scalar fields); outer_step differentiates quantities that
// are themselves finite-difference results (Christoffels, gradients).
struct FdConfig {
    double base_step = 1e-5;
    double outer_step = 1e-4;
};

// Chart-based manifold: one chart, a metric-matrix field, a domain box.
struct ChartManifold {
    int dim = 0;
    Box domain;
    MetricFn metric;
    std::string name;
    FdConfig fd;
};

// Rank-3 Christoffel array Gamma^k_{ij}, stored per upper index k.
struct Christoffel {
    std::vector<Mat> gamma;  // gamma[k](i,j)
    Vec apply(const Vec& x, const Vec& y) const;  // Gamma^k_{ij} x^i y^j
};

Mat eval_metric(const ChartManifold& m, const Vec& p);
Mat metric_inverse(const ChartManifold& m, const Vec& p);

// Central-difference Christoffel symbols of the Levi-Civita connection.
Christoffel christoffel(const ChartManifold& m, const Vec& p);

// (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_{ij} X^i Y^j, with d_i Y by central
// differences. The direction enters only through its value at p.
// step_scale 0 selects m.fd.base_step; pass m.fd.outer_step when Y is itself
// a finite-difference product (projector fields, lifted frames).
TangentVector covariant_derivative(const ChartManifold& m, const VectorField& X,
                                   const VectorField& Y, const Vec& p);
TangentVector covariant_derivative_dir(const ChartManifold& m, const Vec& Xp,
                                       const VectorField& Y, const Vec& p,
                                       double step_scale = 0.0);

TangentVector gradient(const ChartManifold& m, const ScalarField& h, const Vec& p);

// H^h(X,Y) = X(Y(h)) - (nabla_X Y)(h) for constant-component fields X, Y.
double hessian(const ChartManifold& m, const ScalarField& h, const Vec& X, const Vec& Y,
               const Vec& p);

double divergence(const ChartManifold& m, const VectorField& X, const Vec& p);

// Both Laplacian sign conventions: plus = +div grad, minus = -div grad.
enum class LaplacianSign { Plus, Minus };
double laplacian(const ChartManifold& m, const ScalarField& h, const Vec& p,
                 LaplacianSign sign = LaplacianSign::Plus);

// Lie bracket [X,Y] by central differences of the component functions.
Vec lie_bracket(const ChartManifold& m, const VectorField& X, const VectorField& Y, const Vec& p);

double inner(const ChartManifold& m, const Vec& p, const Vec& u, const Vec& v);
double norm(const ChartManifold& m, const Vec& p, const Vec& u);

// g-orthonormal frame spanning the same space as the given (independent)
// columns; plain Gram-Schmidt in the g_M inner product.
Mat orthonormalize(const ChartManifold& m, const Vec& p, const Mat& columns);

// Uniform random interior point of the manifold's sampling box.
Vec sample_point(const ChartManifold& m, std::mt19937_64& rng);

// Random polynomial vector field (degree <= 2 per coordinate, bounded coefficients).
VectorField random_polynomial_field(int dim, std::mt19937_64& rng);

void require_in_domain(const ChartManifold& m, const Vec& p, double margin = 0.0);

}  // namespace wpmap
