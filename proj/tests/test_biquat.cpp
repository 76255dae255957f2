#include <catch2/catch_amalgamated.hpp>

#include "qem/biquat.hpp"
#include "qem/random.hpp"

#include <limits>

using namespace qem;

namespace {
const Biquaternion i1 = Biquaternion::unit(1);
const Biquaternion i2 = Biquaternion::unit(2);
const Biquaternion i3 = Biquaternion::unit(3);
const Biquaternion one = Biquaternion::scalar(1.0);
} // namespace

TEST_CASE("quaternionic units multiply cyclically") {
    REQUIRE(mul(i1, i2) == i3);
    REQUIRE(mul(i2, i3) == i1);
    REQUIRE(mul(i3, i1) == i2);
    REQUIRE(mul(i1, i1) == -one);
    REQUIRE(mul(i2, i2) == -one);
    REQUIRE(mul(i3, i3) == -one);
    // non-commutativity witness
    REQUIRE(mul(i1, i2) == -mul(i2, i1));
}

TEST_CASE("zero divisor pair (1 + i*i1)(1 - i*i1) vanishes exactly") {
    const Biquaternion p = one + imag_unit * i1;
    const Biquaternion q = one - imag_unit * i1;
    const Biquaternion prod = mul(p, q);
    REQUIRE(norm8(prod) == 0.0);
    REQUIRE(norm8(p) != 0.0);
    REQUIRE(norm8(q) != 0.0);
}

TEST_CASE("product of real vectors is -<p,q> + p x q") {
    const Biquaternion p = Biquaternion::vector(Vec3{1, 2, 3});
    const Biquaternion q = Biquaternion::vector(Vec3{4, 5, 6});
    const Biquaternion prod = mul(p, q);
    REQUIRE(prod.s == Complex{-32.0, 0.0});
    REQUIRE(vec(prod) == make_vec3c(Vec3{-3.0, 6.0, -3.0}));
}

TEST_CASE("complex conjugation") {
    SECTION("flips the commuting unit") {
        REQUIRE(conj_complex(imag_unit * i1) == -(imag_unit * i1));
    }
    SECTION("fixes real biquaternions") {
        const Biquaternion a{Complex{2.0, 0.0}, Complex{-1.0, 0.0}, Complex{0.5, 0.0},
                             Complex{3.0, 0.0}};
        REQUIRE(conj_complex(a) == a);
    }
    SECTION("recovers the real and imaginary vectors of f = E + iH") {
        const Vec3 E{0.3, -1.2, 2.0};
        const Vec3 H{1.0, 0.4, -0.7};
        const Biquaternion f = Biquaternion::vector(make_vec3c(E, H));
        const Biquaternion re = 0.5 * (f + conj_complex(f));
        const Biquaternion im = Complex{0.0, -0.5} * (f - conj_complex(f));
        REQUIRE(re == Biquaternion::vector(E));
        REQUIRE(im == Biquaternion::vector(H));
    }
    SECTION("is an involution and a ring automorphism") {
        SeededRng rng(31);
        for (int i = 0; i < 500; ++i) {
            const Biquaternion a = random_biquaternion(rng);
            const Biquaternion b = random_biquaternion(rng);
            REQUIRE(conj_complex(conj_complex(a)) == a);
            REQUIRE(norm8(conj_complex(mul(a, b)) - mul(conj_complex(a), conj_complex(b))) ==
                    0.0);
        }
    }
}

TEST_CASE("scalar and vector part extraction") {
    const Biquaternion a = Biquaternion::scalar(5.0) + 2.0 * i1;
    REQUIRE(sc(a) == Complex{5.0, 0.0});
    REQUIRE(vec(a) == make_vec3c(Vec3{2.0, 0.0, 0.0}));
    SECTION("a = sc(a) + vec(a) exactly") {
        SeededRng rng(5);
        for (int i = 0; i < 200; ++i) {
            const Biquaternion q = random_biquaternion(rng);
            REQUIRE(Biquaternion::scalar(sc(q)) + Biquaternion::vector(vec(q)) == q);
        }
    }
    SECTION("vectorial predicate is exact") {
        REQUIRE(is_vectorial(i1));
        REQUIRE_FALSE(is_vectorial(a));
        REQUIRE_FALSE(is_vectorial(Biquaternion::scalar(Complex{0.0, 1e-300})));
    }
}

TEST_CASE("left and right multiplication operators") {
    REQUIRE(apply_left(i1, i2) == i3);
    REQUIRE(apply_right(i1, i2) == -i3);
    SECTION("real scalars are central") {
        SeededRng rng(17);
        const Biquaternion alpha = Biquaternion::scalar(0.75);
        for (int i = 0; i < 100; ++i) {
            const Biquaternion g = random_biquaternion(rng);
            REQUIRE(apply_left(alpha, g) == apply_right(alpha, g));
        }
    }
}

TEST_CASE("scalar product") {
    REQUIRE(scalar_product(i1, i1) == Complex{1.0, 0.0});
    REQUIRE(scalar_product(i1, i2) == Complex{0.0, 0.0});

    const Vec3C p = make_vec3c(Vec3{1, 2, 3});
    const Vec3C q = make_vec3c(Vec3{4, 5, 6});
    REQUIRE(scalar_product(p, q) == Complex{32.0, 0.0});

    SECTION("anticommutator form agrees and kills the cross product") {
        const Biquaternion anti = scalar_product_anticomm(p, q);
        REQUIRE(norm8(anti - Biquaternion::scalar(32.0)) < 1e-13);
    }
    SECTION("non-vectorial operands are rejected") {
        REQUIRE_THROWS_AS(scalar_product(one + i1, i2), domain_error);
        REQUIRE_THROWS_AS(scalar_product(i1, one), domain_error);
    }
}

TEST_CASE("norm8") {
    REQUIRE(norm8(Biquaternion{}) == 0.0);
    REQUIRE(norm8(one + imag_unit * i1) == Catch::Approx(std::sqrt(2.0)));
    SeededRng rng(23);
    for (int i = 0; i < 200; ++i) {
        const Biquaternion a = random_biquaternion(rng);
        REQUIRE(norm8(a - a) == 0.0);
        if (!(a == Biquaternion{})) REQUIRE(norm8(a) > 0.0);
    }
}

TEST_CASE("product rejects non-finite operands") {
    Biquaternion bad = one;
    bad.v2 = Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
    REQUIRE_THROWS_AS(mul(bad, one), domain_error);
    bad.v2 = Complex{0.0, std::numeric_limits<double>::infinity()};
    REQUIRE_THROWS_AS(mul(one, bad), domain_error);
}

TEST_CASE("algebra property suite on seeded random biquaternions") {
    SeededRng rng(42);
    double assoc = 0.0, anti = 0.0, vlaw = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const Biquaternion a = random_biquaternion(rng);
        const Biquaternion b = random_biquaternion(rng);
        const Biquaternion c = random_biquaternion(rng);
        assoc = std::max(assoc, norm8(mul(mul(a, b), c) - mul(a, mul(b, c))));

        const Vec3C p = random_vec3c(rng);
        const Vec3C q = random_vec3c(rng);
        anti = std::max(anti, norm8(scalar_product_anticomm(p, q) -
                                    Biquaternion::scalar(scalar_product(p, q))));

        const Vec3 pr = random_vec3(rng);
        const Vec3 qr = random_vec3(rng);
        const Biquaternion expected =
            Biquaternion::scalar(-dot(pr, qr)) + Biquaternion::vector(cross(pr, qr));
        vlaw = std::max(vlaw,
                        norm8(mul(Biquaternion::vector(pr), Biquaternion::vector(qr)) - expected));
    }
    REQUIRE(assoc <= 1e-13);
    REQUIRE(anti <= 1e-13);
    REQUIRE(vlaw <= 1e-14);
}
