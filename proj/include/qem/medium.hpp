#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "qem/differential.hpp"
#include "qem/errors.hpp"
#include "qem/expr.hpp"

namespace qem {

struct UnitSystem {
    enum class Mode { Natural, SI };

    Mode mode = Mode::Natural;
    double eps0 = 1.0; // permittivity of free space
    double mu0 = 1.0;  // permeability of free space

    static UnitSystem natural() { return {Mode::Natural, 1.0, 1.0}; }
    // CODATA 2018 values.
    static UnitSystem si() { return {Mode::SI, 8.8541878128e-12, 1.25663706212e-6}; }

    double c0() const { return 1.0 / std::sqrt(eps0 * mu0); }

    const char* name() const { return mode == Mode::SI ? "SI" : "natural"; }
};

// Relative permittivity/permeability profiles. Spatial only: a medium that
// depends on t would break the commutation of d/dt with sqrt(eps), sqrt(mu)
// used by the scaled formulations.
class MediumSpec {
public:
    MediumSpec(Expr eps_r, Expr mu_r, UnitSystem units = UnitSystem::natural())
        : eps_r_(std::move(eps_r)), mu_r_(std::move(mu_r)), units_(units) {
        if (eps_r_.references(Var::T) || mu_r_.references(Var::T))
            throw config_error("medium: eps_r and mu_r must not depend on t");
    }

    const Expr& eps_r() const { return eps_r_; }
    const Expr& mu_r() const { return mu_r_; }
    const UnitSystem& units() const { return units_; }

private:
    Expr eps_r_, mu_r_;
    UnitSystem units_;
};

// Everything the formulations need about the medium at one point:
// eps, mu, the wave speed c = 1/sqrt(eps*mu), the intrinsic impedance
// w = sqrt(mu/eps), plain gradients, and the logarithmic-gradient vectors
// eps_vec = grad(sqrt(eps))/sqrt(eps) = grad(eps)/(2 eps), etc.
struct MediumSample {
    double eps = 1.0, mu = 1.0;
    double c = 1.0, w = 1.0;
    Vec3 grad_eps, grad_mu, grad_c, grad_w;
    Vec3 eps_vec, mu_vec, c_vec, w_vec;

    double sqrt_eps() const { return std::sqrt(eps); }
    double sqrt_mu() const { return std::sqrt(mu); }

    // First-order jets reconstructed from the stored values. The medium is
    // time-independent, so the dt slot is zero.
    Jet4 eps_jet() const { return {eps, 0.0, grad_eps.v1, grad_eps.v2, grad_eps.v3}; }
    Jet4 mu_jet() const { return {mu, 0.0, grad_mu.v1, grad_mu.v2, grad_mu.v3}; }
    Jet4 sqrt_eps_jet() const {
        const double s = sqrt_eps();
        return {s, 0.0, s * eps_vec.v1, s * eps_vec.v2, s * eps_vec.v3};
    }
    Jet4 sqrt_mu_jet() const {
        const double s = sqrt_mu();
        return {s, 0.0, s * mu_vec.v1, s * mu_vec.v2, s * mu_vec.v3};
    }
};

inline MediumSample sample_medium(const MediumSpec& spec, const Point4& p,
                                  DerivativeMode mode = DerivativeMode::Jet,
                                  double fd_step = 1e-4) {
    const Jet4 er = eval_jet(spec.eps_r(), p, mode, fd_step);
    const Jet4 mr = eval_jet(spec.mu_r(), p, mode, fd_step);
    if (!(er.val > 0.0) || !(mr.val > 0.0)) {
        std::ostringstream msg;
        msg << "medium: eps_r and mu_r must be positive, got eps_r=" << er.val
            << ", mu_r=" << mr.val << " at " << p;
        throw domain_error(msg.str());
    }
    const Jet4 eps = spec.units().eps0 * er;
    const Jet4 mu = spec.units().mu0 * mr;
    const Jet4 c = 1.0 / sqrt(eps * mu);
    const Jet4 w = sqrt(mu / eps);

    MediumSample m;
    m.eps = eps.val;
    m.mu = mu.val;
    m.c = c.val;
    m.w = w.val;
    m.grad_eps = gradient(eps);
    m.grad_mu = gradient(mu);
    m.grad_c = gradient(c);
    m.grad_w = gradient(w);
    m.eps_vec = 0.5 / eps.val * m.grad_eps;
    m.mu_vec = 0.5 / mu.val * m.grad_mu;
    m.c_vec = 0.5 / c.val * m.grad_c;
    m.w_vec = 0.5 / w.val * m.grad_w;
    return m;
}

// Residuals of the medium gradient identities
//   eps_vec + mu_vec + grad(c)/c = 0   and   eps_vec - mu_vec + grad(w)/w = 0.
// Both vanish (to round-off) for any differentiable positive medium.
inline std::pair<Vec3, Vec3> check_gradient_identities(const MediumSample& m) {
    const Vec3 first = m.eps_vec + m.mu_vec + 1.0 / m.c * m.grad_c;
    const Vec3 second = m.eps_vec - m.mu_vec + 1.0 / m.w * m.grad_w;
    return {first, second};
}

inline std::pair<Vec3, Vec3> check_gradient_identities(const MediumSpec& spec, const Point4& p) {
    return check_gradient_identities(sample_medium(spec, p));
}

// c_vec = grad(sqrt(c))/sqrt(c) and w_vec = grad(sqrt(w))/sqrt(w); they obey
// -2 c_vec = eps_vec + mu_vec and -2 w_vec = eps_vec - mu_vec.
inline std::pair<Vec3, Vec3> c_and_w_vectors(const MediumSample& m) {
    return {m.c_vec, m.w_vec};
}

} // namespace qem
