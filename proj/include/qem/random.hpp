#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qem/biquat.hpp"
#include "qem/differential.hpp"
#include "qem/expr.hpp"
#include "qem/maxwell.hpp"
#include "qem/medium.hpp"

namespace qem {

// Deterministic random source for the property suites. mt19937_64 with
// uniform doubles built directly from the top 53 bits, so sequences are
// reproducible across platforms and standard libraries.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform in [-1, 1].
    double coeff() { return uniform(-1.0, 1.0); }

    // Inclusive bounds. Modulo bias is irrelevant at these ranges.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

inline Complex random_complex(SeededRng& rng) { return {rng.coeff(), rng.coeff()}; }

inline Vec3 random_vec3(SeededRng& rng) { return {rng.coeff(), rng.coeff(), rng.coeff()}; }

inline Vec3C random_vec3c(SeededRng& rng) {
    return {random_complex(rng), random_complex(rng), random_complex(rng)};
}

inline Biquaternion random_biquaternion(SeededRng& rng) {
    return {random_complex(rng), random_complex(rng), random_complex(rng), random_complex(rng)};
}

inline Point4 random_point(SeededRng& rng) {
    return {rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()};
}

// All five slots uniform in [-1, 1]. The algebraic identities between the
// formulations hold for arbitrary jet values, so these exercise them harder
// than samples of actual smooth fields would.
inline Jet4 random_jet(SeededRng& rng) {
    return {rng.coeff(), rng.coeff(), rng.coeff(), rng.coeff(), rng.coeff()};
}

inline VecFieldSample random_vec_sample(SeededRng& rng) {
    return {random_jet(rng), random_jet(rng), random_jet(rng)};
}

inline QuatFieldSample random_quat_sample(SeededRng& rng) {
    return {random_jet(rng), random_vec_sample(rng)};
}

inline BiquatFieldSample random_biquat_sample(SeededRng& rng) {
    return {random_quat_sample(rng), random_quat_sample(rng)};
}

inline EMState random_state(SeededRng& rng) {
    return {random_vec_sample(rng), random_vec_sample(rng), random_jet(rng),
            random_vec_sample(rng)};
}

// Random polynomial in (t, x1, x2, x3) of total degree <= degree, built as
// an expression tree with coefficients uniform in +-coeff_scale.
inline Expr random_polynomial(SeededRng& rng, int degree, double coeff_scale = 1.0,
                              bool spatial_only = false) {
    Expr sum = Expr::constant(rng.uniform(-coeff_scale, coeff_scale));
    const int first_var = spatial_only ? 1 : 0;
    // Enumerate monomial exponent tuples of total degree 1..degree.
    std::vector<std::array<int, 4>> monomials;
    for (int et = 0; et <= degree; ++et)
        for (int e1 = 0; e1 + et <= degree; ++e1)
            for (int e2 = 0; e2 + e1 + et <= degree; ++e2)
                for (int e3 = 0; e3 + e2 + e1 + et <= degree; ++e3) {
                    if (et + e1 + e2 + e3 == 0) continue;
                    if (spatial_only && et > 0) continue;
                    monomials.push_back({et, e1, e2, e3});
                }
    for (const auto& mexp : monomials) {
        Expr term = Expr::constant(rng.uniform(-coeff_scale, coeff_scale));
        for (int v = first_var; v < 4; ++v) {
            for (int k = 0; k < mexp[static_cast<std::size_t>(v)]; ++k)
                term = term * Expr::variable(static_cast<Var>(v));
        }
        sum = sum + term;
    }
    return sum;
}

// Positive-by-construction medium: exp of a bounded spatial polynomial.
// With degree 2 the polynomial has 10 terms, so |argument| <= 10 * scale on
// the unit box and the profile stays well conditioned.
inline Expr random_positive_profile(SeededRng& rng, int degree = 2, double coeff_scale = 0.1) {
    return Expr::call(JetFn::Exp, random_polynomial(rng, degree, coeff_scale, true));
}

inline MediumSpec random_medium_spec(SeededRng& rng, UnitSystem units = UnitSystem::natural()) {
    return MediumSpec(random_positive_profile(rng), random_positive_profile(rng), units);
}

inline MediumSample random_medium_sample(SeededRng& rng) {
    const MediumSpec spec = random_medium_spec(rng);
    return sample_medium(spec, random_point(rng));
}

// Random expression tree over the full grammar, for print/parse round-trip
// checks. Constants are non-negative, matching what the parser itself can
// produce (a leading minus parses as negation).
inline Expr random_expression(SeededRng& rng, int depth) {
    if (depth <= 0) {
        if (rng.uniform01() < 0.5) return Expr::constant(rng.uniform(0.0, 10.0));
        return Expr::variable(static_cast<Var>(rng.uniform_int(0, 3)));
    }
    switch (rng.uniform_int(0, 7)) {
    case 0: return random_expression(rng, depth - 1) + random_expression(rng, depth - 1);
    case 1: return random_expression(rng, depth - 1) - random_expression(rng, depth - 1);
    case 2: return random_expression(rng, depth - 1) * random_expression(rng, depth - 1);
    case 3: return random_expression(rng, depth - 1) / random_expression(rng, depth - 1);
    case 4: return pow(random_expression(rng, depth - 1), random_expression(rng, depth - 1));
    case 5: return -random_expression(rng, depth - 1);
    case 6:
        return Expr::call(static_cast<JetFn>(rng.uniform_int(0, 5)),
                          random_expression(rng, depth - 1));
    default: return random_expression(rng, 0);
    }
}

// Random byte string for lexer/parser fuzzing: mostly grammar characters
// with some arbitrary bytes mixed in.
inline std::string random_fuzz_input(SeededRng& rng, std::size_t max_len = 48) {
    static const char charset[] = "0123456789.+-*/^(), x123teinsqrabc_\t";
    const std::size_t len = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(max_len)));
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (rng.uniform01() < 0.92)
            s += charset[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(sizeof(charset) - 2)))];
        else
            s += static_cast<char>(rng.uniform_int(1, 255));
    }
    return s;
}

} // namespace qem
