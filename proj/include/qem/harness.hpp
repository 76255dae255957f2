#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qem/maxwell.hpp"
#include "qem/random.hpp"
#include "qem/report.hpp"
#include "qem/scenario.hpp"

namespace qem {

// Tolerances checked by scenario runs. Natural units, fields of order one
// over unit boxes: double precision leaves ~1e-12 of headroom.
namespace tol {
inline constexpr double decomposition = 1e-11;
inline constexpr double chain = 1e-12;
inline constexpr double m_term = 1e-12;
inline constexpr double reconstruction = 1e-15;
inline constexpr double gradient_identity = 1e-12;
inline constexpr double rewrite_scaling = 1e-12;
inline constexpr double vacuum_agreement = 1e-13;
inline constexpr double solution = 1e-11;
inline constexpr double admissibility = 1e-11;

// In fd mode the derivative slots carry O(h^2) truncation error, so checks
// against values that depend on true derivatives get a widened budget. The
// purely algebraic cross-checks (chain, decomposition, ...) stay exact.
inline double fd_budget(DerivativeMode mode, double h) {
    return mode == DerivativeMode::FiniteDifference ? 10.0 * h * h : 0.0;
}
} // namespace tol

// Tensor-product grid, endpoints inclusive, lexicographic (t, x1, x2, x3)
// index order. A degenerate axis must have exactly 1 sample; a non-degenerate
// axis needs at least 2.
inline std::vector<Point4> sample_grid(const Box4& box, const std::array<int, 4>& samples) {
    std::array<std::vector<double>, 4> coords;
    for (int a = 0; a < 4; ++a) {
        const AxisRange& r = box.axis(a);
        const int n = samples[static_cast<std::size_t>(a)];
        if (n < 1) throw config_error("sample_grid: samples must be >= 1");
        if (r.degenerate()) {
            if (n != 1)
                throw config_error("sample_grid: degenerate axis with more than 1 sample");
            coords[static_cast<std::size_t>(a)].push_back(r.lo);
        } else {
            if (n < 2)
                throw config_error("sample_grid: non-degenerate axis needs >= 2 samples");
            for (int i = 0; i < n; ++i)
                coords[static_cast<std::size_t>(a)].push_back(
                    r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
    }
    std::vector<Point4> grid;
    grid.reserve(coords[0].size() * coords[1].size() * coords[2].size() * coords[3].size());
    for (double t : coords[0])
        for (double x1 : coords[1])
            for (double x2 : coords[2])
                for (double x3 : coords[3]) grid.push_back({t, x1, x2, x3});
    return grid;
}

namespace detail {

inline VecFieldSample eval_triple(const std::array<Expr, 3>& c, const Point4& p,
                                  DerivativeMode mode, double h) {
    return {eval_jet(c[0], p, mode, h), eval_jet(c[1], p, mode, h), eval_jet(c[2], p, mode, h)};
}

inline double vec_norm_diff(const Vec3& a, const Vec3& b) { return norm(a - b); }

} // namespace detail

// Evaluates every formulation pointwise over the scenario grid and
// aggregates residual norms plus the cross-formulation consistency checks.
inline ResidualReport run_scenario(const Scenario& s) {
    const MediumSpec mspec(s.eps_r, s.mu_r, s.units);
    const std::vector<Point4> grid = sample_grid(s.box, s.samples);
    const DerivativeMode mode = s.derivative_mode;
    const double h = s.fd_step;

    ResidualReport rep;
    rep.scenario = s.name;
    rep.units = s.units.name();
    rep.derivative_mode = mode == DerivativeMode::Jet ? "jet" : "fd";
    rep.fd_step = h;
    rep.seed = s.seed;
    rep.box = s.box;
    rep.samples = s.samples;
    rep.points = grid.size();
    rep.manufactured_rho = s.rho.manufactured;
    rep.manufactured_j = s.j.manufactured;

    NormAccumulator a_r1, a_r2, a_r3, a_r4, a_rwe, a_rwh;
    NormAccumulator a_min11, a_min12, a_min21, a_min22, a_minq1, a_minq2, a_maxmain, a_vacuum;
    double dev_decomp = 0, dev_chain1 = 0, dev_chain2 = 0, dev_mterm = 0, dev_recon = 0;
    double dev_gradc = 0, dev_gradw = 0, dev_rwscale = 0, dev_vacuum = 0;
    bool all_vacuum = true;

    for (const Point4& p : grid) {
        const MediumSample m = sample_medium(mspec, p, mode, h);

        EMState st;
        st.E = detail::eval_triple(s.E, p, mode, h);
        st.H = detail::eval_triple(s.H, p, mode, h);
        const auto manufactured = extract_sources(st.E, st.H, m);
        if (s.rho.manufactured) st.rho = Jet4::constant(manufactured.first);
        else st.rho = eval_jet(s.rho.components.at(0), p, mode, h);
        if (s.j.manufactured)
            st.j = VecFieldSample{Jet4::constant(manufactured.second.v1),
                                  Jet4::constant(manufactured.second.v2),
                                  Jet4::constant(manufactured.second.v3)};
        else st.j = detail::eval_triple(
                 {s.j.components.at(0), s.j.components.at(1), s.j.components.at(2)}, p,
                 mode, h);

        const ClassicalResiduals cr = classical_residuals(st, m);
        a_r1.add(norm(cr.r1));
        a_r2.add(norm(cr.r2));
        a_r3.add(std::abs(cr.r3));
        a_r4.add(std::abs(cr.r4));

        const auto rw = divergence_rewrite_residuals(st, m);
        a_rwe.add(std::abs(rw.first));
        a_rwh.add(std::abs(rw.second));
        dev_rwscale = std::max(dev_rwscale, std::abs(rw.first * m.eps - cr.r3));
        dev_rwscale = std::max(dev_rwscale, std::abs(rw.second * m.mu - cr.r4));

        const auto m11 = intermediate_residuals(st, m, Form::Min11_12);
        const auto m21 = intermediate_residuals(st, m, Form::Min21_22);
        const auto mq = intermediate_residuals(st, m, Form::Minq1_2);
        a_min11.add(norm8(m11.first));
        a_min12.add(norm8(m11.second));
        a_min21.add(norm8(m21.first));
        a_min22.add(norm8(m21.second));
        a_minq1.add(norm8(mq.first));
        a_minq2.add(norm8(mq.second));

        dev_chain1 = std::max(dev_chain1, norm8(mq.first - m.sqrt_eps() * m11.first) /
                                              std::max(1.0, norm8(mq.first)));
        dev_chain2 = std::max(dev_chain2, norm8(mq.second - m.sqrt_mu() * m11.second) /
                                              std::max(1.0, norm8(mq.second)));

        const MaxmainResidual R = maxmain_residual(st, m);
        a_maxmain.add(norm8(R.R));

        const ClassicalResiduals pred = decompose_residual(R, m);
        dev_decomp = std::max({dev_decomp, detail::vec_norm_diff(pred.r1, cr.r1),
                               detail::vec_norm_diff(pred.r2, cr.r2), std::abs(pred.r3 - cr.r3),
                               std::abs(pred.r4 - cr.r4)});

        const ScaledFields sf = transform_fields(st, m);
        dev_mterm = std::max(dev_mterm, norm8(m_term_identity_residual(sf, m)));
        dev_recon = std::max(
            dev_recon,
            norm8(0.5 * (sf.f + conj_complex(sf.f)) - Biquaternion::vector(sf.e)));
        dev_recon = std::max(
            dev_recon,
            norm8(Complex{0.0, -0.5} * (sf.f - conj_complex(sf.f)) - Biquaternion::vector(sf.h)));

        const auto grad_ids = check_gradient_identities(m);
        dev_gradc = std::max(dev_gradc, norm(grad_ids.first));
        dev_gradw = std::max(dev_gradw, norm(grad_ids.second));

        const bool point_vacuum = m.eps == s.units.eps0 && m.mu == s.units.mu0 &&
                                  m.grad_eps == Vec3{} && m.grad_mu == Vec3{} &&
                                  st.rho.val == 0.0 && values(st.j) == Vec3{};
        if (point_vacuum) {
            const Biquaternion v = vacuum_residual(st, s.units);
            a_vacuum.add(norm8(v));
            dev_vacuum = std::max(dev_vacuum, norm8(v - R.R));
        } else {
            all_vacuum = false;
        }

        if (s.rho.manufactured || s.j.manufactured) {
            rep.adm_max_r2 = std::max(rep.adm_max_r2, norm(cr.r2));
            rep.adm_max_r4 = std::max(rep.adm_max_r4, std::abs(cr.r4));
        }
    }

    rep.r1 = a_r1.result();
    rep.r2 = a_r2.result();
    rep.r3 = a_r3.result();
    rep.r4 = a_r4.result();
    rep.rewrite_e = a_rwe.result();
    rep.rewrite_h = a_rwh.result();
    rep.min11 = a_min11.result();
    rep.min12 = a_min12.result();
    rep.min21 = a_min21.result();
    rep.min22 = a_min22.result();
    rep.minq1 = a_minq1.result();
    rep.minq2 = a_minq2.result();
    rep.maxmain = a_maxmain.result();
    if (all_vacuum) {
        rep.vacuum = a_vacuum.result();
        rep.vacuum_agreement_max = dev_vacuum;
    }
    rep.decomposition_max = dev_decomp;
    rep.chain_q1_max = dev_chain1;
    rep.chain_q2_max = dev_chain2;
    rep.m_term_max = dev_mterm;
    rep.reconstruction_max = dev_recon;
    rep.grad_identity_c_max = dev_gradc;
    rep.grad_identity_w_max = dev_gradw;
    rep.rewrite_scaling_max = dev_rwscale;

    const double budget = tol::fd_budget(mode, h);
    auto fail = [&rep](const std::string& msg) {
        rep.pass = false;
        rep.failures.push_back(msg);
    };
    auto check = [&fail](double value, double bound, const std::string& what) {
        if (!(value <= bound))
            fail(what + " = " + fmt17(value) + " exceeds " + fmt17(bound));
    };

    check(rep.decomposition_max, tol::decomposition, "decomposition deviation");
    check(rep.chain_q1_max, tol::chain, "chain deviation minq1 vs sqrt(eps)*min11");
    check(rep.chain_q2_max, tol::chain, "chain deviation minq2 vs sqrt(mu)*min12");
    check(rep.m_term_max, tol::m_term, "M-term identity residual");
    check(rep.reconstruction_max, tol::reconstruction, "field reconstruction deviation");
    check(rep.grad_identity_c_max, tol::gradient_identity, "gradient identity (c) residual");
    check(rep.grad_identity_w_max, tol::gradient_identity, "gradient identity (w) residual");
    check(rep.rewrite_scaling_max, tol::rewrite_scaling, "divergence rewrite scaling deviation");
    if (rep.vacuum)
        check(rep.vacuum_agreement_max, tol::vacuum_agreement, "vacuum agreement deviation");

    if (s.rho.manufactured || s.j.manufactured) {
        const double bound = tol::admissibility + budget;
        if (!(rep.adm_max_r2 <= bound && rep.adm_max_r4 <= bound))
            fail("manufactured pair inadmissible: max|r2| = " + fmt17(rep.adm_max_r2) +
                 ", max|r4| = " + fmt17(rep.adm_max_r4) + " (bound " + fmt17(bound) + ")");
    }
    if (s.rho.manufactured && s.j.manufactured) {
        rep.solution_checked = true;
        const double bound = tol::solution + budget;
        check(rep.r1.max, bound, "manufactured solution max|r1|");
        check(rep.r2.max, bound, "manufactured solution max|r2|");
        check(rep.r3.max, bound, "manufactured solution max|r3|");
        check(rep.r4.max, bound, "manufactured solution max|r4|");
        check(rep.maxmain.max, bound, "manufactured solution maxmain norm");
        check(rep.minq1.max, bound, "manufactured solution minq1 norm");
        check(rep.minq2.max, bound, "manufactured solution minq2 norm");
    }

    return rep;
}

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

namespace detail {

inline Biquaternion grad_biquat(const Jet4& s) { return Biquaternion::vector(gradient(s)); }

// phi * g with phi a real scalar jet.
inline BiquatFieldSample scale_field(const Jet4& phi, const BiquatFieldSample& g) {
    return phi * g;
}

} // namespace detail

inline IdentityReport run_identity_suite(std::uint64_t seed, int count) {
    if (count < 1) throw config_error("identity suite: count must be >= 1");

    IdentityReport rep;
    rep.seed = seed;
    rep.count = count;

    std::uint64_t salt = 0;
    auto add = [&](const std::string& name, double tolerance, auto&& dev_fn) {
        SeededRng rng(seed + 0x9E3779B97F4A7C15ULL * ++salt);
        double mx = 0.0;
        for (int i = 0; i < count; ++i) mx = std::max(mx, dev_fn(rng));
        rep.results.push_back({name, count, mx, tolerance, mx <= tolerance});
        if (mx > tolerance) rep.pass = false;
    };

    add("associativity", 1e-13, [](SeededRng& rng) {
        const Biquaternion a = random_biquaternion(rng);
        const Biquaternion b = random_biquaternion(rng);
        const Biquaternion c = random_biquaternion(rng);
        return norm8(mul(mul(a, b), c) - mul(a, mul(b, c)));
    });

    add("conjugation automorphism", 1e-13, [](SeededRng& rng) {
        const Biquaternion a = random_biquaternion(rng);
        const Biquaternion b = random_biquaternion(rng);
        return norm8(conj_complex(mul(a, b)) - mul(conj_complex(a), conj_complex(b)));
    });

    add("vector product law", 1e-14, [](SeededRng& rng) {
        const Vec3 p = random_vec3(rng);
        const Vec3 q = random_vec3(rng);
        const Biquaternion expected =
            Biquaternion::scalar(-dot(p, q)) + Biquaternion::vector(cross(p, q));
        return norm8(mul(Biquaternion::vector(p), Biquaternion::vector(q)) - expected);
    });

    add("anticommutator scalar product", 1e-13, [](SeededRng& rng) {
        const Vec3C p = random_vec3c(rng);
        const Vec3C q = random_vec3c(rng);
        return norm8(scalar_product_anticomm(p, q) - Biquaternion::scalar(scalar_product(p, q)));
    });

    add("D assembled vs componentwise", 1e-13, [](SeededRng& rng) {
        const QuatFieldSample g = random_quat_sample(rng);
        return norm8(apply_D(g) - apply_D_componentwise(g));
    });

    add("Leibniz product rule", 1e-12, [](SeededRng& rng) {
        const Expr phi = random_polynomial(rng, 2);
        BiquatFieldSample g;
        const Point4 p = random_point(rng);
        auto poly_jet = [&rng, &p]() { return random_polynomial(rng, 2).eval(p); };
        g.re = {poly_jet(), {poly_jet(), poly_jet(), poly_jet()}};
        g.im = {poly_jet(), {poly_jet(), poly_jet(), poly_jet()}};
        const Jet4 phj = phi.eval(p);
        const BiquatFieldSample pg = phj * g;
        const Biquaternion lhs = apply_D(pg);
        const Biquaternion rhs =
            mul(detail::grad_biquat(phj), values(g)) + phj.val * apply_D(g);
        return norm8(lhs - rhs);
    });

    add("gradient factorization", 1e-12, [](SeededRng& rng) {
        const Expr phi = Expr::call(JetFn::Exp, random_polynomial(rng, 2, 0.2));
        BiquatFieldSample g;
        const Point4 p = random_point(rng);
        auto poly_jet = [&rng, &p]() { return random_polynomial(rng, 2).eval(p); };
        g.re = {poly_jet(), {poly_jet(), poly_jet(), poly_jet()}};
        g.im = {poly_jet(), {poly_jet(), poly_jet(), poly_jet()}};
        const Jet4 phj = phi.eval(p);
        // (D + grad(phi)/phi acting from the left) g == (1/phi) D[phi g]
        const Biquaternion lhs =
            apply_D(g) + mul(1.0 / phj.val * detail::grad_biquat(phj), values(g));
        const Biquaternion rhs = 1.0 / phj.val * apply_D(phj * g);
        return norm8(lhs - rhs);
    });

    add("medium gradient identity (c)", 1e-12, [](SeededRng& rng) {
        return norm(check_gradient_identities(random_medium_sample(rng)).first);
    });

    add("medium gradient identity (w)", 1e-12, [](SeededRng& rng) {
        return norm(check_gradient_identities(random_medium_sample(rng)).second);
    });

    add("medium speed and impedance", 1e-14, [](SeededRng& rng) {
        const MediumSample m = random_medium_sample(rng);
        return std::max(std::abs(m.c * std::sqrt(m.eps * m.mu) - 1.0),
                        std::abs(m.w - std::sqrt(m.mu / m.eps)) / m.w);
    });

    add("M-term identity", 1e-12, [](SeededRng& rng) {
        const MediumSample m = random_medium_sample(rng);
        const EMState st = random_state(rng);
        return norm8(m_term_identity_residual(st, m));
    });

    add("chain minq1 = sqrt(eps) min11", 1e-12, [](SeededRng& rng) {
        const MediumSample m = random_medium_sample(rng);
        const EMState st = random_state(rng);
        const auto m11 = intermediate_residuals(st, m, Form::Min11_12);
        const auto mq = intermediate_residuals(st, m, Form::Minq1_2);
        return norm8(mq.first - m.sqrt_eps() * m11.first) / std::max(1.0, norm8(mq.first));
    });

    add("chain minq2 = sqrt(mu) min12", 1e-12, [](SeededRng& rng) {
        const MediumSample m = random_medium_sample(rng);
        const EMState st = random_state(rng);
        const auto m11 = intermediate_residuals(st, m, Form::Min11_12);
        const auto mq = intermediate_residuals(st, m, Form::Minq1_2);
        return norm8(mq.second - m.sqrt_mu() * m11.second) / std::max(1.0, norm8(mq.second));
    });

    add("min21 pair equals min11 pair", 1e-13, [](SeededRng& rng) {
        const MediumSample m = random_medium_sample(rng);
        const EMState st = random_state(rng);
        const auto m11 = intermediate_residuals(st, m, Form::Min11_12);
        const auto m21 = intermediate_residuals(st, m, Form::Min21_22);
        return std::max(norm8(m21.first - m11.first), norm8(m21.second - m11.second));
    });

    add("residual decomposition", 1e-11, [](SeededRng& rng) {
        const MediumSample m = random_medium_sample(rng);
        const EMState st = random_state(rng);
        const ClassicalResiduals cr = classical_residuals(st, m);
        const ClassicalResiduals pred = decompose_residual(maxmain_residual(st, m), m);
        return std::max({norm(pred.r1 - cr.r1), norm(pred.r2 - cr.r2),
                         std::abs(pred.r3 - cr.r3), std::abs(pred.r4 - cr.r4)});
    });

    add("divergence rewrite scaling", 1e-12, [](SeededRng& rng) {
        const MediumSample m = random_medium_sample(rng);
        const EMState st = random_state(rng);
        const ClassicalResiduals cr = classical_residuals(st, m);
        const auto rw = divergence_rewrite_residuals(st, m);
        return std::max(std::abs(rw.first * m.eps - cr.r3), std::abs(rw.second * m.mu - cr.r4));
    });

    add("vacuum reduction", 1e-13, [](SeededRng& rng) {
        const UnitSystem units = UnitSystem::natural();
        MediumSample m; // homogeneous vacuum: all defaults, gradients zero
        EMState st = random_state(rng);
        st.rho = Jet4{};
        st.j = VecFieldSample{};
        return norm8(maxmain_residual(st, m).R - vacuum_residual(st, units));
    });

    add("scaled-field reconstruction", 1e-15, [](SeededRng& rng) {
        const MediumSample m = random_medium_sample(rng);
        const EMState st = random_state(rng);
        const ScaledFields sf = transform_fields(st, m);
        const double de =
            norm8(0.5 * (sf.f + conj_complex(sf.f)) - Biquaternion::vector(sf.e));
        const double dh = norm8(Complex{0.0, -0.5} * (sf.f - conj_complex(sf.f)) -
                                Biquaternion::vector(sf.h));
        return std::max(de, dh);
    });

    return rep;
}

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

// For each step h, the max over the grid, the scenario's expressions, and
// the four derivative slots of |fd - jet|; then a log-log least-squares fit
// of the error order.
inline ConvergenceReport convergence_study(const Scenario& s, const std::vector<double>& h_list) {
    if (h_list.size() < 3) throw config_error("convergence: need at least 3 step sizes");
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (!(h_list[i] > 0.0)) throw config_error("convergence: steps must be positive");
        if (i > 0 && !(h_list[i] < h_list[i - 1]))
            throw config_error("convergence: steps must be strictly decreasing");
    }

    std::vector<Expr> exprs;
    for (const Expr& e : s.E) exprs.push_back(e);
    for (const Expr& e : s.H) exprs.push_back(e);
    exprs.push_back(s.eps_r);
    exprs.push_back(s.mu_r);
    if (!s.rho.manufactured)
        for (const Expr& e : s.rho.components) exprs.push_back(e);
    if (!s.j.manufactured)
        for (const Expr& e : s.j.components) exprs.push_back(e);

    const std::vector<Point4> grid = sample_grid(s.box, s.samples);

    ConvergenceReport rep;
    rep.h = h_list;
    for (double h : h_list) {
        double err = 0.0;
        for (const Point4& p : grid) {
            for (const Expr& e : exprs) {
                const Jet4 exact = e.eval(p);
                const Jet4 approx =
                    fd_jet([&e](const Point4& q) { return e.eval_value(q); }, p, h);
                err = std::max({err, std::abs(exact.dt - approx.dt),
                                std::abs(exact.d1 - approx.d1), std::abs(exact.d2 - approx.d2),
                                std::abs(exact.d3 - approx.d3)});
            }
        }
        rep.max_err.push_back(err);
    }

    double max_seen = 0.0;
    for (double e : rep.max_err) max_seen = std::max(max_seen, e);
    rep.roundoff_limited = max_seen < 1e-11;

    // Least squares on log(err) vs log(h), skipping exact zeros.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (rep.max_err[i] <= 0.0) continue;
        const double x = std::log(h_list[i]);
        const double y = std::log(rep.max_err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2 && sxx * n - sx * sx != 0.0)
        rep.fitted_order = (sxy * n - sx * sy) / (sxx * n - sx * sx);
    return rep;
}

} // namespace qem
