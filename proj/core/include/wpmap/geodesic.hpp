#pragma once

#include <vector>

#include "wpmap/rmap.hpp"
#include "wpmap/warped.hpp"

namespace wpmap {

// Time-stamped trace of a curve with optional vertical/horizontal splitting.
struct GeodesicTrace {
    ChartManifold manifold;
    std::vector<double> t;
    std::vector<Vec> p;
    std::vector<Vec> v;
    bool domain_exit = false;
    double b0 = 0.0;  // g(v,v) at launch

    // Filled by decompose():
    bool decomposed = false;
    std::vector<Vec> U, Y;                 // vertical / horizontal parts of v
    std::vector<double> b, omega;          // speed-squared and angle in [0, pi/2]
    std::vector<double> clairaut;          // filled by the Clairaut analyzer

    std::size_t size() const { return t.size(); }

    // Covariant derivative of a sampled field W(t) along the curve at sample i
    // (interior samples only): centered dW/dt plus the Christoffel correction.
    Vec along_curve_derivative(const std::vector<Vec>& W, std::size_t i) const;
};

// Fixed-step RK4 integration of the geodesic equation. The trace is truncated
// and flagged if the curve leaves the chart box; StepTooLarge if the energy
// drift exceeds 1e-3 relative.
GeodesicTrace integrate(const ChartManifold& m, const Vec& p0, const Vec& v0, double t_end,
                        double dt);

// Sample an arbitrary parametric curve (position and velocity callables).
GeodesicTrace trace_curve(const ChartManifold& m, const std::function<Vec(double)>& pos,
                          const std::function<Vec(double)>& vel, double t0, double t1, double dt);

// Fill U, Y, omega, b from the map's vertical/horizontal splitting.
void decompose(const RiemannianMap& phi, GeodesicTrace& trace);

enum class GeodesicCase { Vertical = 1, Horizontal = 2, Oblique = 3 };

struct Theorem31Residuals {
    GeodesicCase which;
    std::vector<double> t;
    // Case 1: r1 = |T(U,U)|, r2 = |hat-nabla_U U|.
    // Case 2: r1 = |A(Y,Y)|, r2 = |H nabla_Y Y|.
    // Case 3: r1 = vertical combination, r2 = horizontal combination, and
    //         a_yy = |A(Y,Y)| reported separately (antisymmetry makes it zero
    //         for a single field; kept as its own series rather than folded in).
    std::vector<double> r1, r2, a_yy;
    double max_r1 = 0.0, max_r2 = 0.0;
};

// Evaluates the case conditions as residual series along a decomposed trace.
// CaseMismatch if the trace's angle contradicts the requested case.
Theorem31Residuals theorem31_residuals(const RiemannianMap& phi, const GeodesicTrace& trace,
                                       GeodesicCase which, std::size_t stride = 10);

struct ResidualSeries {
    std::vector<double> t;
    std::vector<double> r;
    double max_residual = 0.0;
};

// | nabla_gdot gdot - [factor-curve accelerations + warp coupling terms] |
// per sample; an identity for arbitrary curves on the warped product.
ResidualSeries eq3_expansion_check(const WarpedProduct& w, const GeodesicTrace& trace,
                                   std::size_t stride = 10);

}  // namespace wpmap
