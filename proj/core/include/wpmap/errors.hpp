#pragma once

#include <stdexcept>
#include <string>

namespace wpmap {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& msg) : Error("out of domain: " + msg) {}
};

struct SingularMetric : Error {
    explicit SingularMetric(const std::string& msg) : Error("singular metric: " + msg) {}
};

struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : Error("parse error at byte " + std::to_string(off) + ": " + msg), offset(off) {}
};

struct UnknownSymbol : Error {
    explicit UnknownSymbol(const std::string& name) : Error("unknown symbol: " + name) {}
};

struct ArityError : Error {
    explicit ArityError(const std::string& msg) : Error("arity error: " + msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("domain error: " + msg) {}
};

struct NonPositiveWarp : Error {
    explicit NonPositiveWarp(const std::string& msg) : Error("non-positive warp: " + msg) {}
};

struct MixedField : Error {
    explicit MixedField(const std::string& msg) : Error("mixed field: " + msg) {}
};

struct RankDrop : Error {
    explicit RankDrop(const std::string& msg) : Error("ambiguous jacobian rank: " + msg) {}
};

struct NoFibers : Error {
    explicit NoFibers(const std::string& msg) : Error("no fibers: " + msg) {}
};

struct CaseMismatch : Error {
    explicit CaseMismatch(const std::string& msg) : Error("case mismatch: " + msg) {}
};

struct StepTooLarge : Error {
    explicit StepTooLarge(const std::string& msg) : Error("step too large: " + msg) {}
};

struct DegeneratePlane : Error {
    explicit DegeneratePlane(const std::string& msg) : Error("degenerate plane: " + msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

struct UnknownCheck : Error {
    explicit UnknownCheck(const std::string& name) : Error("unknown check: " + name) {}
};

}  // namespace wpmap
