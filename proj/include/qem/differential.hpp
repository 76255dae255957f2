#pragma once

#include "qem/biquat.hpp"
#include "qem/jet.hpp"

namespace qem {

// A real vector field at a point: one jet per component.
struct VecFieldSample {
    Jet4 c1, c2, c3;
};

// A real quaternion-valued field at a point: scalar part + vector part.
struct QuatFieldSample {
    Jet4 s;
    VecFieldSample v;
};

// An H(C)-valued field at a point. Complex-valued fields are pairs of real
// jets; the complex unit enters only at the biquaternion layer.
struct BiquatFieldSample {
    QuatFieldSample re, im;
};

inline Vec3 values(const VecFieldSample& v) { return {v.c1.val, v.c2.val, v.c3.val}; }
inline Vec3 time_derivative(const VecFieldSample& v) { return {v.c1.dt, v.c2.dt, v.c3.dt}; }

inline double divergence(const VecFieldSample& v) { return v.c1.d1 + v.c2.d2 + v.c3.d3; }

inline Vec3 curl(const VecFieldSample& v) {
    return {v.c3.d2 - v.c2.d3,
            v.c1.d3 - v.c3.d1,
            v.c2.d1 - v.c1.d2};
}

inline Vec3 gradient(const Jet4& s) { return {s.d1, s.d2, s.d3}; }

inline VecFieldSample operator+(const VecFieldSample& a, const VecFieldSample& b) {
    return {a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3};
}
inline VecFieldSample operator-(const VecFieldSample& a, const VecFieldSample& b) {
    return {a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3};
}
inline VecFieldSample operator*(double c, const VecFieldSample& a) {
    return {c * a.c1, c * a.c2, c * a.c3};
}
// Pointwise product with a scalar jet (product rule in every slot).
inline VecFieldSample operator*(const Jet4& s, const VecFieldSample& a) {
    return {s * a.c1, s * a.c2, s * a.c3};
}
inline QuatFieldSample operator*(const Jet4& s, const QuatFieldSample& a) {
    return {s * a.s, s * a.v};
}
inline BiquatFieldSample operator*(const Jet4& s, const BiquatFieldSample& a) {
    return {s * a.re, s * a.im};
}

inline Biquaternion values(const QuatFieldSample& g) {
    return {Complex{g.s.val, 0.0}, Complex{g.v.c1.val, 0.0}, Complex{g.v.c2.val, 0.0},
            Complex{g.v.c3.val, 0.0}};
}
inline Biquaternion values(const BiquatFieldSample& g) {
    return values(g.re) + imag_unit * values(g.im);
}

// The Moisil-Theodoresco operator D = i1 d1 + i2 d2 + i3 d3 in assembled
// form: Dg = -div(vec g) + grad(g0) + rot(vec g).
inline Biquaternion apply_D(const QuatFieldSample& g) {
    const Vec3 gr = gradient(g.s);
    const Vec3 cu = curl(g.v);
    return {Complex{-divergence(g.v), 0.0},
            Complex{gr.v1 + cu.v1, 0.0},
            Complex{gr.v2 + cu.v2, 0.0},
            Complex{gr.v3 + cu.v3, 0.0}};
}

inline Biquaternion apply_D(const VecFieldSample& v) { return apply_D(QuatFieldSample{Jet4{}, v}); }

// D of a scalar field is its gradient.
inline Biquaternion apply_D(const Jet4& s) { return apply_D(QuatFieldSample{s, VecFieldSample{}}); }

inline Biquaternion apply_D(const BiquatFieldSample& g) {
    return apply_D(g.re) + imag_unit * apply_D(g.im);
}

// Self-check route: D applied literally as sum_k i_k * (d_k g) through the
// biquaternion product. Must agree with apply_D.
inline Biquaternion apply_D_componentwise(const QuatFieldSample& g) {
    auto partial = [&g](int k) {
        auto slot = [k](const Jet4& j) {
            switch (k) {
            case 1: return j.d1;
            case 2: return j.d2;
            default: return j.d3;
            }
        };
        return Biquaternion{Complex{slot(g.s), 0.0}, Complex{slot(g.v.c1), 0.0},
                            Complex{slot(g.v.c2), 0.0}, Complex{slot(g.v.c3), 0.0}};
    };
    Biquaternion sum{};
    for (int k = 1; k <= 3; ++k) sum = sum + mul(Biquaternion::unit(k), partial(k));
    return sum;
}

inline Biquaternion apply_D_componentwise(const BiquatFieldSample& g) {
    return apply_D_componentwise(g.re) + imag_unit * apply_D_componentwise(g.im);
}

} // namespace qem
