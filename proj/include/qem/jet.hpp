#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "qem/errors.hpp"

namespace qem {

struct Point4 {
    double t = 0.0, x1 = 0.0, x2 = 0.0, x3 = 0.0;

    bool operator==(const Point4&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const Point4& p) {
    return os << "(t=" << p.t << ", x1=" << p.x1 << ", x2=" << p.x2 << ", x3=" << p.x3 << ")";
}

// First-order space-time jet: a value together with its four partial
// derivatives (d/dt, d/dx1, d/dx2, d/dx3). Arithmetic propagates the
// derivative slots by the product/quotient/chain rules.
struct Jet4 {
    double val = 0.0;
    double dt = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;

    static Jet4 constant(double c) { return {c, 0.0, 0.0, 0.0, 0.0}; }

    bool operator==(const Jet4&) const = default;
};

// Variable seeds at a point.
inline Jet4 jet_t(const Point4& p) { return {p.t, 1.0, 0.0, 0.0, 0.0}; }
inline Jet4 jet_x1(const Point4& p) { return {p.x1, 0.0, 1.0, 0.0, 0.0}; }
inline Jet4 jet_x2(const Point4& p) { return {p.x2, 0.0, 0.0, 1.0, 0.0}; }
inline Jet4 jet_x3(const Point4& p) { return {p.x3, 0.0, 0.0, 0.0, 1.0}; }

inline Jet4 operator+(const Jet4& a, const Jet4& b) {
    return {a.val + b.val, a.dt + b.dt, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
inline Jet4 operator-(const Jet4& a, const Jet4& b) {
    return {a.val - b.val, a.dt - b.dt, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
inline Jet4 operator-(const Jet4& a) { return {-a.val, -a.dt, -a.d1, -a.d2, -a.d3}; }

inline Jet4 operator*(const Jet4& a, const Jet4& b) {
    return {a.val * b.val,
            a.dt * b.val + a.val * b.dt,
            a.d1 * b.val + a.val * b.d1,
            a.d2 * b.val + a.val * b.d2,
            a.d3 * b.val + a.val * b.d3};
}

inline Jet4 operator/(const Jet4& a, const Jet4& b) {
    if (b.val == 0.0) throw domain_error("jet division by zero value");
    const double v = a.val / b.val;
    return {v,
            (a.dt - v * b.dt) / b.val,
            (a.d1 - v * b.d1) / b.val,
            (a.d2 - v * b.d2) / b.val,
            (a.d3 - v * b.d3) / b.val};
}

inline Jet4 operator+(const Jet4& a, double c) { return {a.val + c, a.dt, a.d1, a.d2, a.d3}; }
inline Jet4 operator+(double c, const Jet4& a) { return a + c; }
inline Jet4 operator-(const Jet4& a, double c) { return a + (-c); }
inline Jet4 operator-(double c, const Jet4& a) { return -a + c; }
inline Jet4 operator*(const Jet4& a, double c) {
    return {a.val * c, a.dt * c, a.d1 * c, a.d2 * c, a.d3 * c};
}
inline Jet4 operator*(double c, const Jet4& a) { return a * c; }
inline Jet4 operator/(const Jet4& a, double c) { return a * (1.0 / c); }
inline Jet4 operator/(double c, const Jet4& a) { return Jet4::constant(c) / a; }

namespace detail {
// Chain rule for a unary elementary function: maps the jet through
// (f(val), f'(val) * slot). Throws if the result is non-finite.
inline Jet4 lift(const char* name, const Jet4& a, double fval, double dval) {
    Jet4 r{fval, dval * a.dt, dval * a.d1, dval * a.d2, dval * a.d3};
    if (!std::isfinite(r.val) || !std::isfinite(r.dt) || !std::isfinite(r.d1) ||
        !std::isfinite(r.d2) || !std::isfinite(r.d3))
        throw domain_error(std::string(name) + ": non-finite result in jet evaluation");
    return r;
}
} // namespace detail

inline Jet4 sin(const Jet4& a) { return detail::lift("sin", a, std::sin(a.val), std::cos(a.val)); }
inline Jet4 cos(const Jet4& a) { return detail::lift("cos", a, std::cos(a.val), -std::sin(a.val)); }
inline Jet4 exp(const Jet4& a) {
    const double e = std::exp(a.val);
    return detail::lift("exp", a, e, e);
}
inline Jet4 log(const Jet4& a) {
    if (!(a.val > 0.0)) throw domain_error("log: argument must be positive");
    return detail::lift("log", a, std::log(a.val), 1.0 / a.val);
}
inline Jet4 sqrt(const Jet4& a) {
    if (!(a.val > 0.0)) throw domain_error("sqrt: argument must be positive");
    const double s = std::sqrt(a.val);
    return detail::lift("sqrt", a, s, 0.5 / s);
}
inline Jet4 tanh(const Jet4& a) {
    const double th = std::tanh(a.val);
    return detail::lift("tanh", a, th, 1.0 - th * th);
}

enum class JetFn { Sin, Cos, Exp, Log, Sqrt, Tanh };

inline const char* name(JetFn f) {
    switch (f) {
    case JetFn::Sin: return "sin";
    case JetFn::Cos: return "cos";
    case JetFn::Exp: return "exp";
    case JetFn::Log: return "log";
    case JetFn::Sqrt: return "sqrt";
    case JetFn::Tanh: return "tanh";
    }
    return "?";
}

inline Jet4 jet_fn(JetFn f, const Jet4& a) {
    switch (f) {
    case JetFn::Sin: return sin(a);
    case JetFn::Cos: return cos(a);
    case JetFn::Exp: return exp(a);
    case JetFn::Log: return log(a);
    case JetFn::Sqrt: return sqrt(a);
    case JetFn::Tanh: return tanh(a);
    }
    throw domain_error("jet_fn: unknown function id");
}

// Integer power by repeated multiplication; valid for any base (negative
// exponents divide, so a zero base throws there).
inline Jet4 pow_int(const Jet4& a, long long n) {
    if (n < 0) return Jet4::constant(1.0) / pow_int(a, -n);
    Jet4 result = Jet4::constant(1.0);
    Jet4 base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

// Central finite differences: an independent first-derivative oracle with
// O(h^2) truncation error. `field` is any callable double(Point4).
template <typename F>
Jet4 fd_jet(F&& field, const Point4& p, double h) {
    if (!(h > 0.0)) throw domain_error("fd_jet: step h must be positive");
    auto diff = [&](Point4 plus, Point4 minus) {
        return (field(plus) - field(minus)) / (2.0 * h);
    };
    Jet4 r;
    r.val = field(p);
    r.dt = diff(Point4{p.t + h, p.x1, p.x2, p.x3}, Point4{p.t - h, p.x1, p.x2, p.x3});
    r.d1 = diff(Point4{p.t, p.x1 + h, p.x2, p.x3}, Point4{p.t, p.x1 - h, p.x2, p.x3});
    r.d2 = diff(Point4{p.t, p.x1, p.x2 + h, p.x3}, Point4{p.t, p.x1, p.x2 - h, p.x3});
    r.d3 = diff(Point4{p.t, p.x1, p.x2, p.x3 + h}, Point4{p.t, p.x1, p.x2, p.x3 - h});
    return r;
}

inline std::ostream& operator<<(std::ostream& os, const Jet4& j) {
    return os << "{val=" << j.val << ", dt=" << j.dt << ", d1=" << j.d1
              << ", d2=" << j.d2 << ", d3=" << j.d3 << "}";
}

} // namespace qem
