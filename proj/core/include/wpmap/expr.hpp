#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wpmap {

// Smooth scalar expressions over chart coordinates x1..xn.
// Grammar (see parse): + - * / ^ (right-assoc), exp, ln, sin, cos, tan, sqrt,
// unary minus. '^' binds tighter than unary minus applied to its base, so
// "-x1^2" means -(x1^2). No implicit multiplication.
class Expr {
public:
    Expr() = default;

    // Parses src against a declared coordinate count; identifiers other than
    // x1..xn and the builtin function names raise UnknownSymbol.
    static Expr parse(const std::string& src, int n_coords);

    double eval(const Eigen::VectorXd& p) const;

    // Central-difference partial derivative in coordinate i (0-based).
    double deriv(int i, const Eigen::VectorXd& p) const;

    std::string pretty() const;

    int coords() const { return n_coords_; }
    bool valid() const { return root_ != nullptr; }

    bool structurally_equal(const Expr& other) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    int n_coords_ = 0;
};

// Scalar field on a chart: either a parsed expression or a native callable.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(Expr e);  // NOLINT(google-explicit-constructor)
    ScalarField(std::function<double(const Eigen::VectorXd&)> fn, std::string label = "<native>");

    static ScalarField parse(const std::string& src, int n_coords);

    double operator()(const Eigen::VectorXd& p) const { return fn_(p); }
    double deriv(int i, const Eigen::VectorXd& p) const;

    const std::string& label() const { return label_; }
    bool valid() const { return static_cast<bool>(fn_); }

private:
    std::function<double(const Eigen::VectorXd&)> fn_;
    std::string label_;
};

// Module-wide finite-difference step control: step(x) = scale * max(1,|x|).
double fd_step(double coordinate, double scale = 1e-5);

}  // namespace wpmap
