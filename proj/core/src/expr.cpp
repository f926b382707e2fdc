#include "wpmap/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

#include "wpmap/errors.hpp"

namespace wpmap {

double fd_step(double coordinate, double scale) {
    return scale * std::max(1.0, std::abs(coordinate));
}

enum class NodeKind { Num, Coord, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Expr::Node {
    NodeKind kind;
    double value = 0.0;        // Num
    int index = 0;             // Coord
    std::string fn;            // Call
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(NodeKind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_known_fn(const std::string& name) {
    return name == "exp" || name == "ln" || name == "sin" || name == "cos" ||
           name == "tan" || name == "sqrt";
}

class Parser {
public:
    Parser(const std::string& src, int n_coords) : src_(src), n_(n_coords) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
        NodePtr e = expr();
        skip_ws();
        if (pos_ < src_.size())
            throw ParseError("trailing input '" + src_.substr(pos_) + "'", pos_);
        return e;
    }

private:
    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+')) lhs = make(NodeKind::Add, lhs, term());
            else if (accept('-')) lhs = make(NodeKind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) lhs = make(NodeKind::Mul, lhs, factor());
            else if (accept('/')) lhs = make(NodeKind::Div, lhs, factor());
            else return lhs;
        }
    }

    // '^' is right-associative and binds tighter than unary minus on its base:
    // -x1^2 parses as -(x1^2).
    NodePtr factor() {
        skip_ws();
        if (accept('-')) return make(NodeKind::Neg, factor());
        NodePtr base = atom();
        skip_ws();
        if (accept('^')) return make(NodeKind::Pow, base, factor());
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        try {
            auto n = std::make_shared<Expr::Node>();
            n->kind = NodeKind::Num;
            n->value = std::stod(src_.substr(start, pos_ - start));
            return n;
        } catch (const std::exception&) {
            throw ParseError("bad number literal", start);
        }
    }

    NodePtr ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '(') {
            if (!is_known_fn(name)) throw UnknownSymbol(name);
            ++pos_;
            NodePtr arg = expr();
            expect(')');
            auto n = std::make_shared<Expr::Node>();
            n->kind = NodeKind::Call;
            n->fn = name;
            n->a = arg;
            return n;
        }
        // Coordinate x1..xn.
        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits) {
                int idx = std::stoi(name.substr(1));
                if (idx < 1 || idx > n_)
                    throw UnknownSymbol(name + " (declared coordinates: x1..x" +
                                        std::to_string(n_) + ")");
                auto node = std::make_shared<Expr::Node>();
                node->kind = NodeKind::Coord;
                node->index = idx - 1;
                return node;
            }
        }
        if (is_known_fn(name))
            throw ArityError("function '" + name + "' requires an argument list");
        throw UnknownSymbol(name);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        if (pos_ < src_.size() && src_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    void expect(char c) {
        skip_ws();
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    const std::string& src_;
    int n_;
    std::size_t pos_ = 0;
};

std::string pretty_node(const NodePtr& n);

double eval_node(const NodePtr& n, const Eigen::VectorXd& p) {
    switch (n->kind) {
        case NodeKind::Num: return n->value;
        case NodeKind::Coord: return p[n->index];
        case NodeKind::Neg: return -eval_node(n->a, p);
        case NodeKind::Add: return eval_node(n->a, p) + eval_node(n->b, p);
        case NodeKind::Sub: return eval_node(n->a, p) - eval_node(n->b, p);
        case NodeKind::Mul: return eval_node(n->a, p) * eval_node(n->b, p);
        case NodeKind::Div: {
            double d = eval_node(n->b, p);
            if (d == 0.0) throw DomainError("division by zero in " + pretty_node(n));
            return eval_node(n->a, p) / d;
        }
        case NodeKind::Pow: {
            double base = eval_node(n->a, p), e = eval_node(n->b, p);
            double r = std::pow(base, e);
            if (!std::isfinite(r)) throw DomainError("pow out of domain in " + pretty_node(n));
            return r;
        }
        case NodeKind::Call: {
            double x = eval_node(n->a, p);
            if (n->fn == "exp") return std::exp(x);
            if (n->fn == "ln") {
                if (x <= 0.0) throw DomainError("ln of non-positive value in " + pretty_node(n));
                return std::log(x);
            }
            if (n->fn == "sin") return std::sin(x);
            if (n->fn == "cos") return std::cos(x);
            if (n->fn == "tan") return std::tan(x);
            if (n->fn == "sqrt") {
                if (x < 0.0) throw DomainError("sqrt of negative value in " + pretty_node(n));
                return std::sqrt(x);
            }
            throw UnknownSymbol(n->fn);
        }
    }
    throw Error("unreachable expression node");
}

std::string pretty_node(const NodePtr& n) {
    std::ostringstream os;
    switch (n->kind) {
        case NodeKind::Num: {
            os.precision(17);
            os << n->value;
            break;
        }
        case NodeKind::Coord: os << "x" << (n->index + 1); break;
        case NodeKind::Neg: os << "-(" << pretty_node(n->a) << ")"; break;
        case NodeKind::Add: os << "(" << pretty_node(n->a) << " + " << pretty_node(n->b) << ")"; break;
        case NodeKind::Sub: os << "(" << pretty_node(n->a) << " - " << pretty_node(n->b) << ")"; break;
        case NodeKind::Mul: os << "(" << pretty_node(n->a) << " * " << pretty_node(n->b) << ")"; break;
        case NodeKind::Div: os << "(" << pretty_node(n->a) << " / " << pretty_node(n->b) << ")"; break;
        case NodeKind::Pow: os << "(" << pretty_node(n->a) << ")^(" << pretty_node(n->b) << ")"; break;
        case NodeKind::Call: os << n->fn << "(" << pretty_node(n->a) << ")"; break;
    }
    return os.str();
}

bool equal_node(const NodePtr& a, const NodePtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Num: return a->value == b->value;
        case NodeKind::Coord: return a->index == b->index;
        case NodeKind::Neg: return equal_node(a->a, b->a);
        case NodeKind::Call: return a->fn == b->fn && equal_node(a->a, b->a);
        default: return equal_node(a->a, b->a) && equal_node(a->b, b->b);
    }
}

}  // namespace

Expr Expr::parse(const std::string& src, int n_coords) {
    Expr e;
    e.root_ = Parser(src, n_coords).run();
    e.n_coords_ = n_coords;
    return e;
}

double Expr::eval(const Eigen::VectorXd& p) const {
    if (p.size() < n_coords_)
        throw ArityError("point has " + std::to_string(p.size()) + " coordinates, expression needs " +
                         std::to_string(n_coords_));
    return eval_node(root_, p);
}

double Expr::deriv(int i, const Eigen::VectorXd& p) const {
    double h = fd_step(p[i]);
    Eigen::VectorXd q = p;
    q[i] = p[i] + h;
    double fp = eval(q);
    q[i] = p[i] - h;
    double fm = eval(q);
    return (fp - fm) / (2.0 * h);
}

std::string Expr::pretty() const { return root_ ? pretty_node(root_) : std::string(); }

bool Expr::structurally_equal(const Expr& other) const { return equal_node(root_, other.root_); }

ScalarField::ScalarField(Expr e)
    : fn_([e](const Eigen::VectorXd& p) { return e.eval(p); }), label_(e.pretty()) {}

ScalarField::ScalarField(std::function<double(const Eigen::VectorXd&)> fn, std::string label)
    : fn_(std::move(fn)), label_(std::move(label)) {}

ScalarField ScalarField::parse(const std::string& src, int n_coords) {
    ScalarField f(Expr::parse(src, n_coords));
    f.label_ = src;
    return f;
}

double ScalarField::deriv(int i, const Eigen::VectorXd& p) const {
    double h = fd_step(p[i]);
    Eigen::VectorXd q = p;
    q[i] = p[i] + h;
    double fp = fn_(q);
    q[i] = p[i] - h;
    double fm = fn_(q);
    return (fp - fm) / (2.0 * h);
}

}  // namespace wpmap
