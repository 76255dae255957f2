#include <catch2/catch_amalgamated.hpp>

#include "qem/medium.hpp"
#include "qem/random.hpp"

using namespace qem;

TEST_CASE("homogeneous natural-units medium reduces to exact unity") {
    const MediumSpec spec(Expr::constant(1.0), Expr::constant(1.0));
    const MediumSample m = sample_medium(spec, Point4{0.2, 0.4, 0.6, 0.8});
    REQUIRE(m.eps == 1.0);
    REQUIRE(m.mu == 1.0);
    REQUIRE(m.c == 1.0);
    REQUIRE(m.w == 1.0);
    // constant expressions have identically zero derivative slots
    REQUIRE(m.grad_eps == Vec3{});
    REQUIRE(m.grad_mu == Vec3{});
    REQUIRE(m.eps_vec == Vec3{});
    REQUIRE(m.mu_vec == Vec3{});
    REQUIRE(m.c_vec == Vec3{});
    REQUIRE(m.w_vec == Vec3{});
}

TEST_CASE("exponential permittivity profile") {
    // eps_r = exp(2 x3): sqrt(eps) = exp(x3), so eps_vec = (0,0,1),
    // c = w = exp(-x3) and c_vec = w_vec = (0,0,-1/2).
    const MediumSpec spec(Expr::parse("exp(2*x3)"), Expr::constant(1.0));
    const Point4 p{0.0, 0.3, 0.9, 0.35};
    const MediumSample m = sample_medium(spec, p);
    REQUIRE(m.eps == Catch::Approx(std::exp(2.0 * p.x3)));
    REQUIRE(m.eps_vec.v1 == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(m.eps_vec.v2 == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(m.eps_vec.v3 == Catch::Approx(1.0).epsilon(1e-14));
    REQUIRE(m.mu_vec == Vec3{});
    REQUIRE(m.c == Catch::Approx(std::exp(-p.x3)).epsilon(1e-14));
    REQUIRE(m.w == Catch::Approx(std::exp(-p.x3)).epsilon(1e-14));
    REQUIRE(m.c_vec.v3 == Catch::Approx(-0.5).epsilon(1e-13));
    REQUIRE(m.w_vec.v3 == Catch::Approx(-0.5).epsilon(1e-13));

    SECTION("gradient identity residuals vanish") {
        const auto ids = check_gradient_identities(spec, p);
        REQUIRE(norm(ids.first) <= 1e-13);
        REQUIRE(norm(ids.second) <= 1e-13);
    }
    SECTION("finite-difference mode agrees to O(h^2)") {
        const MediumSample fd = sample_medium(spec, p, DerivativeMode::FiniteDifference, 1e-4);
        REQUIRE(fd.eps == Catch::Approx(m.eps));
        REQUIRE(fd.eps_vec.v3 == Catch::Approx(m.eps_vec.v3).margin(1e-7));
        REQUIRE(fd.c_vec.v3 == Catch::Approx(m.c_vec.v3).margin(1e-7));
    }
}

TEST_CASE("SI vacuum reproduces the speed of light") {
    const MediumSpec spec(Expr::constant(1.0), Expr::constant(1.0), UnitSystem::si());
    const MediumSample m = sample_medium(spec, Point4{});
    REQUIRE(m.c == Catch::Approx(2.99792458e8).epsilon(1e-9));
    REQUIRE(m.w == Catch::Approx(376.7303).epsilon(1e-6));
    REQUIRE(UnitSystem::si().c0() == Catch::Approx(2.99792458e8).epsilon(1e-9));
}

TEST_CASE("medium validation") {
    SECTION("time-dependent profiles are rejected at construction") {
        REQUIRE_THROWS_AS(MediumSpec(Expr::parse("1 + t"), Expr::constant(1.0)), config_error);
        REQUIRE_THROWS_AS(MediumSpec(Expr::constant(1.0), Expr::parse("exp(t*x1)")),
                          config_error);
    }
    SECTION("non-positive values fail with the offending point") {
        const MediumSpec spec(Expr::parse("x1 - 2"), Expr::constant(1.0));
        REQUIRE_THROWS_WITH(sample_medium(spec, Point4{0.0, 0.5, 0.0, 0.0}),
                            Catch::Matchers::ContainsSubstring("x1=0.5"));
    }
}

TEST_CASE("gradient identities hold on random positive media") {
    SeededRng rng(42);
    double worst_c = 0.0, worst_w = 0.0, worst_speed = 0.0, worst_imp = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const MediumSample m = random_medium_sample(rng);
        const auto ids = check_gradient_identities(m);
        worst_c = std::max(worst_c, norm(ids.first));
        worst_w = std::max(worst_w, norm(ids.second));
        worst_speed = std::max(worst_speed, std::abs(m.c * std::sqrt(m.eps * m.mu) - 1.0));
        worst_imp = std::max(worst_imp, std::abs(m.w - std::sqrt(m.mu / m.eps)) / m.w);
    }
    REQUIRE(worst_c <= 1e-12);
    REQUIRE(worst_w <= 1e-12);
    REQUIRE(worst_speed <= 1e-14);
    REQUIRE(worst_imp <= 1e-14);
}

TEST_CASE("c and w vectors determine the medium log-gradients") {
    SeededRng rng(77);
    for (int i = 0; i < 300; ++i) {
        const MediumSample m = random_medium_sample(rng);
        const auto [c_vec, w_vec] = c_and_w_vectors(m);
        // -2 c_vec = eps_vec + mu_vec, -2 w_vec = eps_vec - mu_vec
        REQUIRE(norm(-2.0 * c_vec - (m.eps_vec + m.mu_vec)) <= 1e-12);
        REQUIRE(norm(-2.0 * w_vec - (m.eps_vec - m.mu_vec)) <= 1e-12);
        // and back again
        REQUIRE(norm(m.eps_vec + (c_vec + w_vec)) <= 1e-12);
        REQUIRE(norm(m.mu_vec + (c_vec - w_vec)) <= 1e-12);
    }
}
