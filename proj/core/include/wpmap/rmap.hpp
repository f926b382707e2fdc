#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wpmap/warped.hpp"

namespace wpmap {

using MapFn = std::function<Vec(const Vec&)>;

// Smooth map between chart manifolds with finite-difference Jacobians and the
// per-point vertical/horizontal splitting of T_pM by ker of the pushforward.
class RiemannianMap {
public:
    static RiemannianMap from_fn(ChartManifold source, ChartManifold target, MapFn fn,
                                 std::string name);
    static RiemannianMap from_exprs(ChartManifold source, ChartManifold target,
                                    const std::vector<Expr>& components, std::string name);

    const ChartManifold& source() const { return source_; }
    const ChartManifold& target() const { return target_; }
    const std::string& name() const { return name_; }

    Vec apply(const Vec& p) const { return fn_(p); }
    Mat jacobian(const Vec& p) const;
    TangentVector pushforward(const Vec& p, const Vec& v) const;

    // Projection matrices onto ker(phi_*) and its g_M-orthogonal complement.
    // Basis-independent, hence smooth in p at constant rank.
    Mat vertical_projector(const Vec& p) const;
    Mat horizontal_projector(const Vec& p) const;

    struct Frame {
        Vec point;
        Mat vertical;    // g_M-orthonormal columns spanning ker phi_*
        Mat horizontal;  // g_M-orthonormal columns spanning the complement
    };
    Frame frame(const Vec& p) const;  // RankDrop on ambiguous numerical rank

    // O'Neill tensors; the operators apply the projections themselves.
    TangentVector tensor_T(const Vec& p, const Vec& E1, const Vec& E2) const;
    TangentVector tensor_A(const Vec& p, const Vec& E1, const Vec& E2) const;

    struct Lemma21Report {
        double identity_residual = 0.0;  // max over the four decomposition identities
        double basic_residual = 0.0;     // H nabla_V X vs A_X V for basic X
    };
    Lemma21Report lemma21_decomposition_check(const Vec& p, std::mt19937_64& rng) const;

    TangentVector fiber_mean_curvature(const Vec& p) const;  // NoFibers if dim V = 0
    double umbilical_residual(const Vec& p) const;

    // (nabla phi_*)(X,Y) in target chart components, via the pullback
    // connection evaluated along coordinate stencils in the source.
    Vec second_fundamental_form(const Vec& p, const Vec& X, const Vec& Y) const;
    Vec horizontal_tension(const Vec& p) const;  // sum_a (nabla phi_*)(e_a, e_a)

    // Max deviation of phi_* restricted to the horizontal space from a linear
    // isometry onto its image.
    double isometry_residual(const Vec& p) const;

    // Smooth horizontal-lift field of a constant target vector (submersions).
    VectorField basic_field(const Vec& target_vec) const;

private:
    ChartManifold source_, target_;
    MapFn fn_;
    std::string name_;

    Mat null_basis(const Vec& p) const;  // Euclidean-orthonormal basis of ker J
};

// Product map phi1 x phi2 between warped products, per the factor structure.
class ProductRiemannianMap {
public:
    // phi1/phi2 are expressions in the product coordinates x1..x(m1+m2); phi1
    // entries may only use the base block, phi2 entries only the fiber block.
    static ProductRiemannianMap from_exprs(WarpedProduct source, WarpedProduct target,
                                           const std::vector<std::string>& phi1,
                                           const std::vector<std::string>& phi2);
    // Built-ins: "pi1", "pi2", "identity".
    static ProductRiemannianMap builtin(const WarpedProduct& source, const std::string& which);

    const WarpedProduct& source_product() const { return source_; }
    const WarpedProduct& target_product() const { return target_; }
    const RiemannianMap& map() const { return map_; }

    int m1() const { return source_.base_dim(); }
    int m2() const { return source_.fiber_dim(); }
    int n1() const { return target_.base_dim(); }
    int n2() const { return target_.fiber_dim(); }

    // Factor maps as standalone chart maps.
    const RiemannianMap& factor1() const { return phi1_; }
    const RiemannianMap& factor2() const { return phi2_; }

private:
    WarpedProduct source_, target_;
    RiemannianMap map_, phi1_, phi2_;

    ProductRiemannianMap(WarpedProduct s, WarpedProduct t, RiemannianMap m, RiemannianMap f1,
                         RiemannianMap f2)
        : source_(std::move(s)), target_(std::move(t)), map_(std::move(m)),
          phi1_(std::move(f1)), phi2_(std::move(f2)) {}
};

// The Heisenberg-group submersion (x,y,z) -> (x,y) onto the Euclidean plane.
RiemannianMap heisenberg_submersion();

}  // namespace wpmap
