#include "wpmap/catalog.hpp"

#include <cmath>

#include "wpmap/errors.hpp"

namespace wpmap {

namespace {

constexpr double kSingularMargin = 0.05;

ChartManifold euclidean(int n) {
    ChartManifold m;
    m.dim = n;
    m.domain = Box::unbounded(n);
    m.metric = [n](const Vec&) { return Mat::Identity(n, n); };
    m.name = n == 1 ? "line" : "euclidean:" + std::to_string(n);
    return m;
}

ChartManifold interval(double a, double b) {
    ChartManifold m;
    m.dim = 1;
    m.domain.lo = Vec::Constant(1, a);
    m.domain.hi = Vec::Constant(1, b);
    m.metric = [](const Vec&) { return Mat::Identity(1, 1); };
    m.name = "interval(" + std::to_string(a) + "," + std::to_string(b) + ")";
    return m;
}

ChartManifold polar2() {
    ChartManifold m;
    m.dim = 2;
    m.domain = Box::unbounded(2);
    m.domain.lo[0] = kSingularMargin;  // metric degenerates at x = 0
    m.metric = [](const Vec& p) {
        Mat g = Mat::Identity(2, 2);
        g(1, 1) = p[0] * p[0];
        return g;
    };
    m.name = "polar2";
    return m;
}

ChartManifold sphere2() {
    ChartManifold m;
    m.dim = 2;
    m.domain = Box::unbounded(2);
    m.domain.lo[0] = kSingularMargin;
    m.domain.hi[0] = M_PI - kSingularMargin;
    m.metric = [](const Vec& p) {
        Mat g = Mat::Identity(2, 2);
        double s = std::sin(p[0]);
        g(1, 1) = s * s;
        return g;
    };
    m.name = "sphere2";
    return m;
}

ChartManifold hyperbolic2() {
    ChartManifold m;
    m.dim = 2;
    m.domain = Box::unbounded(2);
    m.domain.lo[1] = kSingularMargin;
    m.metric = [](const Vec& p) {
        double y2 = p[1] * p[1];
        Mat g = Mat::Identity(2, 2);
        g(0, 0) = 1.0 / y2;
        g(1, 1) = 1.0 / y2;
        return g;
    };
    m.name = "hyperbolic2";
    return m;
}

// g = dx^2 + dy^2 + (dz - x dy)^2
ChartManifold heisenberg3() {
    ChartManifold m;
    m.dim = 3;
    m.domain = Box::unbounded(3);
    m.metric = [](const Vec& p) {
        double x = p[0];
        Mat g = Mat::Identity(3, 3);
        g(1, 1) = 1.0 + x * x;
        g(1, 2) = -x;
        g(2, 1) = -x;
        return g;
    };
    m.name = "heisenberg3";
    return m;
}

}  // namespace

ChartManifold catalog_manifold(const std::string& name) {
    if (name == "line") return euclidean(1);
    if (name == "circle") {
        ChartManifold m = euclidean(1);
        m.name = "circle";  // single unbounded chart; periodicity not modeled
        return m;
    }
    if (name == "polar2") return polar2();
    if (name == "sphere2") return sphere2();
    if (name == "hyperbolic2") return hyperbolic2();
    if (name == "heisenberg3") return heisenberg3();
    if (name.rfind("euclidean:", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(name.substr(10));
        } catch (const std::exception&) {
            throw ConfigError("bad euclidean dimension in '" + name + "'");
        }
        if (n < 1) throw ConfigError("euclidean dimension must be positive: '" + name + "'");
        return euclidean(n);
    }
    if (name.rfind("interval(", 0) == 0 && name.back() == ')') {
        std::string body = name.substr(9, name.size() - 10);
        auto comma = body.find(',');
        if (comma == std::string::npos)
            throw ConfigError("interval needs two endpoints: '" + name + "'");
        try {
            double a = std::stod(body.substr(0, comma));
            double b = std::stod(body.substr(comma + 1));
            if (!(a < b)) throw ConfigError("empty interval: '" + name + "'");
            ChartManifold m = interval(a, b);
            m.name = name;
            return m;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("bad interval endpoints: '" + name + "'");
        }
    }
    throw ConfigError("unknown catalog manifold '" + name + "'");
}

bool is_catalog_manifold(const std::string& name) {
    try {
        catalog_manifold(name);
        return true;
    } catch (const ConfigError&) {
        return false;
    }
}

std::vector<std::string> catalog_names() {
    return {"circle",      "euclidean:<n>", "heisenberg3", "hyperbolic2",
            "interval(a,b)", "line",          "polar2",      "sphere2"};
}

}  // namespace wpmap
