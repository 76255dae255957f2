#pragma once

#include <cmath>
#include <complex>
#include <ostream>

#include "qem/errors.hpp"

namespace qem {

using Complex = std::complex<double>;

// The commuting imaginary unit of H(C). Distinct from the quaternionic units
// i1, i2, i3, which anticommute among themselves; i commutes with everything.
inline const Complex imag_unit{0.0, 1.0};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// Real and complex 3-vectors
// ---------------------------------------------------------------------------

struct Vec3 {
    double v1 = 0.0, v2 = 0.0, v3 = 0.0;

    bool operator==(const Vec3&) const = default;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3}; }
inline Vec3 operator-(const Vec3& a) { return {-a.v1, -a.v2, -a.v3}; }
inline Vec3 operator*(double c, const Vec3& a) { return {c * a.v1, c * a.v2, c * a.v3}; }
inline Vec3 operator*(const Vec3& a, double c) { return c * a; }
inline Vec3 operator/(const Vec3& a, double c) { return {a.v1 / c, a.v2 / c, a.v3 / c}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.v1 * b.v1 + a.v2 * b.v2 + a.v3 * b.v3; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.v2 * b.v3 - a.v3 * b.v2,
            a.v3 * b.v1 - a.v1 * b.v3,
            a.v1 * b.v2 - a.v2 * b.v1};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Vec3C {
    Complex v1{}, v2{}, v3{};

    bool operator==(const Vec3C&) const = default;
};

inline Vec3C make_vec3c(const Vec3& re, const Vec3& im = Vec3{}) {
    return {Complex{re.v1, im.v1}, Complex{re.v2, im.v2}, Complex{re.v3, im.v3}};
}

inline Vec3C operator+(const Vec3C& a, const Vec3C& b) { return {a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3}; }
inline Vec3C operator-(const Vec3C& a, const Vec3C& b) { return {a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3}; }
inline Vec3C operator-(const Vec3C& a) { return {-a.v1, -a.v2, -a.v3}; }
inline Vec3C operator*(const Complex& c, const Vec3C& a) { return {c * a.v1, c * a.v2, c * a.v3}; }
inline Vec3C operator*(double c, const Vec3C& a) { return {c * a.v1, c * a.v2, c * a.v3}; }

// Bilinear scalar product p1*q1 + p2*q2 + p3*q3 (no conjugation).
inline Complex dot(const Vec3C& a, const Vec3C& b) { return a.v1 * b.v1 + a.v2 * b.v2 + a.v3 * b.v3; }

inline Vec3C cross(const Vec3C& a, const Vec3C& b) {
    return {a.v2 * b.v3 - a.v3 * b.v2,
            a.v3 * b.v1 - a.v1 * b.v3,
            a.v1 * b.v2 - a.v2 * b.v1};
}

inline Vec3 real(const Vec3C& a) { return {a.v1.real(), a.v2.real(), a.v3.real()}; }
inline Vec3 imag(const Vec3C& a) { return {a.v1.imag(), a.v2.imag(), a.v3.imag()}; }

// ---------------------------------------------------------------------------
// Biquaternion: an element of H(C)
// ---------------------------------------------------------------------------

// q = s + v1*i1 + v2*i2 + v3*i3 with complex coefficients. Multiplication
// convention: i1*i2 = i3 (cyclic), i_k^2 = -1.
struct Biquaternion {
    Complex s{};             // scalar part g0
    Complex v1{}, v2{}, v3{}; // vector part coefficients

    static Biquaternion scalar(const Complex& c) { return {c, {}, {}, {}}; }
    static Biquaternion scalar(double c) { return {Complex{c, 0.0}, {}, {}, {}}; }
    static Biquaternion vector(const Vec3C& v) { return {{}, v.v1, v.v2, v.v3}; }
    static Biquaternion vector(const Vec3& v) {
        return {{}, Complex{v.v1, 0.0}, Complex{v.v2, 0.0}, Complex{v.v3, 0.0}};
    }
    // The quaternionic unit i_k, k in {1,2,3}.
    static Biquaternion unit(int k) {
        Biquaternion q;
        if (k == 1) q.v1 = 1.0;
        else if (k == 2) q.v2 = 1.0;
        else if (k == 3) q.v3 = 1.0;
        else throw domain_error("Biquaternion::unit: k must be 1, 2 or 3");
        return q;
    }

    bool operator==(const Biquaternion&) const = default;
};

inline bool is_finite(const Biquaternion& a) {
    return is_finite(a.s) && is_finite(a.v1) && is_finite(a.v2) && is_finite(a.v3);
}

inline Biquaternion operator+(const Biquaternion& a, const Biquaternion& b) {
    return {a.s + b.s, a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3};
}
inline Biquaternion operator-(const Biquaternion& a, const Biquaternion& b) {
    return {a.s - b.s, a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3};
}
inline Biquaternion operator-(const Biquaternion& a) { return {-a.s, -a.v1, -a.v2, -a.v3}; }
inline Biquaternion operator*(const Complex& c, const Biquaternion& a) {
    return {c * a.s, c * a.v1, c * a.v2, c * a.v3};
}
inline Biquaternion operator*(double c, const Biquaternion& a) {
    return {c * a.s, c * a.v1, c * a.v2, c * a.v3};
}

// Quaternion product over complex coefficients.
inline Biquaternion mul(const Biquaternion& a, const Biquaternion& b) {
    if (!is_finite(a) || !is_finite(b))
        throw domain_error("biquaternion product: non-finite operand");
    return {a.s * b.s - a.v1 * b.v1 - a.v2 * b.v2 - a.v3 * b.v3,
            a.s * b.v1 + a.v1 * b.s + a.v2 * b.v3 - a.v3 * b.v2,
            a.s * b.v2 + a.v2 * b.s + a.v3 * b.v1 - a.v1 * b.v3,
            a.s * b.v3 + a.v3 * b.s + a.v1 * b.v2 - a.v2 * b.v1};
}

inline Biquaternion operator*(const Biquaternion& a, const Biquaternion& b) { return mul(a, b); }

// Component-wise complex conjugation, written "*" in quaternionic analysis.
// A ring automorphism of H(C) (the structure constants are real).
inline Biquaternion conj_complex(const Biquaternion& a) {
    return {std::conj(a.s), std::conj(a.v1), std::conj(a.v2), std::conj(a.v3)};
}

inline Complex sc(const Biquaternion& a) { return a.s; }
inline Vec3C vec(const Biquaternion& a) { return {a.v1, a.v2, a.v3}; }

// Exact test: the scalar part is identically zero.
inline bool is_vectorial(const Biquaternion& a) {
    return a.s.real() == 0.0 && a.s.imag() == 0.0;
}

// alpha-M g := alpha * g
inline Biquaternion apply_left(const Biquaternion& alpha, const Biquaternion& g) { return mul(alpha, g); }
// M-alpha g := g * alpha
inline Biquaternion apply_right(const Biquaternion& alpha, const Biquaternion& g) { return mul(g, alpha); }

inline Complex scalar_product(const Vec3C& p, const Vec3C& q) { return dot(p, q); }

inline Complex scalar_product(const Biquaternion& p, const Biquaternion& q) {
    if (!is_vectorial(p) || !is_vectorial(q))
        throw domain_error("scalar_product: operands must be purely vectorial");
    return dot(vec(p), vec(q));
}

// The anticommutator route to the same scalar product: -1/2 (p*q + q*p).
// Returned as a full biquaternion so callers can verify the vector part
// cancels.
inline Biquaternion scalar_product_anticomm(const Biquaternion& p, const Biquaternion& q) {
    return -0.5 * (apply_left(p, q) + apply_right(p, q));
}
inline Biquaternion scalar_product_anticomm(const Vec3C& p, const Vec3C& q) {
    return scalar_product_anticomm(Biquaternion::vector(p), Biquaternion::vector(q));
}

// Euclidean norm of the 8 real components. H(C) has zero divisors, so no
// multiplicative norm exists; this is the residual metric.
inline double norm8(const Biquaternion& a) {
    return std::sqrt(std::norm(a.s) + std::norm(a.v1) + std::norm(a.v2) + std::norm(a.v3));
}

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.v1 << ", " << v.v2 << ", " << v.v3 << ")";
}
inline std::ostream& operator<<(std::ostream& os, const Vec3C& v) {
    return os << "(" << v.v1 << ", " << v.v2 << ", " << v.v3 << ")";
}
inline std::ostream& operator<<(std::ostream& os, const Biquaternion& q) {
    return os << q.s << " + " << q.v1 << " i1 + " << q.v2 << " i2 + " << q.v3 << " i3";
}

} // namespace qem
