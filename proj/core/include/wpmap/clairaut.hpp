#pragma once

#include <vector>

#include "wpmap/geodesic.hpp"

namespace wpmap {

struct InvariantSeries {
    std::vector<double> t, value;
    double initial = 0.0;
    double max_abs_drift = 0.0;
    double max_rel_drift = 0.0;  // relative to |initial|, absolute if initial ~ 0
};

// Samples of e^{g(gamma(t))} * sin(omega(t)); also fills trace.clairaut.
InvariantSeries invariant_series(GeodesicTrace& trace, const ScalarField& g);

// |g_M(T(U,U) + A(Y,U), Y) - b cos(w) sin(w) dw/dt| along a decomposed geodesic.
ResidualSeries eqAT_check(const RiemannianMap& phi, const GeodesicTrace& trace,
                          std::size_t stride = 10);

struct ClairautReport {
    // Condition side: T(U,U) = -g_M(U,U) grad g over the vertical distribution,
    // and totally geodesic fibers of phi2 on (M2, g2).
    double umbilical_residual = 0.0;
    double totally_geodesic_residual = 0.0;
    bool condition_verdict = false;

    // Sweep side (filled by geodesic_sweep).
    std::vector<double> drifts;  // per-launch relative invariant drift
    double max_drift = 0.0;
    bool drift_verdict = false;
    bool verdicts_agree = false;
    int failed_runs = 0;
};

// The canonical clairaut_g for warped-product projections: g = ln f.
ScalarField auto_clairaut_g(const WarpedProduct& w);

ClairautReport clairaut_condition_check(const ProductRiemannianMap& phi, const ScalarField& g,
                                        std::mt19937_64& rng, int samples = 30,
                                        double tolerance = 1e-4);

struct Launch {
    Vec p0, v0;
    double t_end = 10.0;
    double dt = 1e-3;
};

ClairautReport geodesic_sweep(const ProductRiemannianMap& phi, const ScalarField& g,
                              const std::vector<Launch>& launches, std::mt19937_64& rng,
                              double drift_tolerance = 1e-4);

}  // namespace wpmap
