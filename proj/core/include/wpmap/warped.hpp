#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wpmap/manifold.hpp"

namespace wpmap {

// Vector field lifted from one factor of a warped product: the field lives on
// the factor chart and is zero-padded in the other block of the product chart.
struct LiftedField {
    int origin = 1;  // 1 = base, 2 = fiber
    VectorField field;
};

// M = M1 x_f M2 with the block metric g1 (+) f^2 g2 on the concatenated chart.
class WarpedProduct {
public:
    // Checks warp positivity on 1000 sampled base points (NonPositiveWarp).
    static WarpedProduct build(ChartManifold base, ChartManifold fiber, ScalarField warp);

    const ChartManifold& base() const { return base_; }
    const ChartManifold& fiber() const { return fiber_; }
    const ChartManifold& manifold() const { return product_; }
    const ScalarField& warp() const { return warp_; }
    int base_dim() const { return base_.dim; }
    int fiber_dim() const { return fiber_.dim; }
    int dim() const { return product_.dim; }

    Vec base_point(const Vec& p) const { return p.head(base_.dim); }
    Vec fiber_point(const Vec& p) const { return p.tail(fiber_.dim); }

    // The splitting isomorphism and its inverse (coordinate concatenation).
    std::pair<Vec, Vec> split(const Vec& v) const;
    Vec lift(int origin, const Vec& factor_vec) const;
    LiftedField lift_field(int origin, VectorField factor_field) const;

    // Checks a product-chart field is a pure lift from one factor (MixedField).
    LiftedField as_lifted(const VectorField& product_field, int origin,
                          std::mt19937_64& rng) const;

    // grad of ln f in (M1, g1) at the base point of p, lifted to the product.
    Vec grad_ln_warp(const Vec& p) const;

    // Closed-form warped connection, by lift-origin case.
    TangentVector warped_connection(const LiftedField& X, const LiftedField& Y,
                                    const Vec& p) const;

    struct Lemma22Report {
        double residual[4] = {0, 0, 0, 0};  // cases (1,1), (1,2), (2,1), (2,2)
        double max_residual = 0.0;
    };
    // Closed form vs the brute-force product-metric covariant derivative, for
    // random lifted polynomial fields at random points.
    Lemma22Report verify_lemma22(int samples, std::mt19937_64& rng) const;

private:
    ChartManifold base_, fiber_, product_;
    ScalarField warp_;
};

// Catalog warped products: "product" (line x_1 line), "spheremodel"
// (interval x_sin circle), "h3model" (line x_e^x euclidean:2), "coshmodel"
// (line x_cosh line).
WarpedProduct catalog_warped(const std::string& name);
std::vector<std::string> catalog_warped_names();

}  // namespace wpmap
