// qem: certify the equivalence of the Maxwell formulations pointwise on
// analytically defined fields and media.
//
// Exit codes: 0 all checked tolerances pass, 1 a tolerance failed,
// 2 configuration or domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qem/qem.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitToleranceFailure = 1;
constexpr int kExitConfigError = 2;

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw qem::config_error("convergence: bad step value '" + item + "'");
        }
    }
    if (out.empty()) throw qem::config_error("convergence: empty step list");
    return out;
}

int cmd_identities(std::uint64_t seed, int count) {
    const qem::IdentityReport rep = qem::run_identity_suite(seed, count);
    std::cout << rep.to_text();
    return rep.pass ? kExitPass : kExitToleranceFailure;
}

int cmd_residual(const std::string& scenario_path, const std::string& out_path) {
    const qem::Scenario s = qem::load_scenario(scenario_path);
    const qem::ResidualReport rep = qem::run_scenario(s);
    const std::string json = rep.to_json();
    if (out_path.empty()) {
        std::cout << json;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw qem::config_error("cannot write report file '" + out_path + "'");
        out << json;
        std::cout << "report written to " << out_path << "\n";
    }
    std::ostream& diag = out_path.empty() ? std::cerr : std::cout;
    if (rep.pass) {
        diag << "scenario '" << rep.scenario << "': all checks PASS\n";
    } else {
        diag << "scenario '" << rep.scenario << "': FAIL\n";
        for (const auto& f : rep.failures) diag << "  " << f << "\n";
    }
    return rep.pass ? kExitPass : kExitToleranceFailure;
}

int cmd_convergence(const std::string& scenario_path, const std::string& h_text) {
    const qem::Scenario s = qem::load_scenario(scenario_path);
    const qem::ConvergenceReport rep = qem::convergence_study(s, parse_h_list(h_text));
    std::cout << rep.to_text();
    const bool pass =
        rep.roundoff_limited || (rep.fitted_order >= 1.9 && rep.fitted_order <= 2.1);
    std::cout << (pass ? "convergence PASS\n" : "convergence FAIL\n");
    return pass ? kExitPass : kExitToleranceFailure;
}

int cmd_sources(const std::string& scenario_path) {
    const qem::Scenario s = qem::load_scenario(scenario_path);
    const qem::MediumSpec mspec(s.eps_r, s.mu_r, s.units);
    const auto grid = qem::sample_grid(s.box, s.samples);

    std::cout << "# t x1 x2 x3 rho j1 j2 j3\n";
    double max_r2 = 0.0, max_r4 = 0.0;
    for (const qem::Point4& p : grid) {
        const qem::MediumSample m = qem::sample_medium(mspec, p, s.derivative_mode, s.fd_step);
        qem::EMState st;
        st.E = {qem::eval_jet(s.E[0], p, s.derivative_mode, s.fd_step),
                qem::eval_jet(s.E[1], p, s.derivative_mode, s.fd_step),
                qem::eval_jet(s.E[2], p, s.derivative_mode, s.fd_step)};
        st.H = {qem::eval_jet(s.H[0], p, s.derivative_mode, s.fd_step),
                qem::eval_jet(s.H[1], p, s.derivative_mode, s.fd_step),
                qem::eval_jet(s.H[2], p, s.derivative_mode, s.fd_step)};
        const auto src = qem::extract_sources(st.E, st.H, m);
        st.rho = qem::Jet4::constant(src.first);
        st.j = {qem::Jet4::constant(src.second.v1), qem::Jet4::constant(src.second.v2),
                qem::Jet4::constant(src.second.v3)};
        const qem::ClassicalResiduals cr = qem::classical_residuals(st, m);
        max_r2 = std::max(max_r2, qem::norm(cr.r2));
        max_r4 = std::max(max_r4, std::abs(cr.r4));
        std::cout << qem::fmt17(p.t) << ' ' << qem::fmt17(p.x1) << ' ' << qem::fmt17(p.x2) << ' '
                  << qem::fmt17(p.x3) << ' ' << qem::fmt17(src.first) << ' '
                  << qem::fmt17(src.second.v1) << ' ' << qem::fmt17(src.second.v2) << ' '
                  << qem::fmt17(src.second.v3) << "\n";
    }
    const double bound =
        qem::tol::admissibility + qem::tol::fd_budget(s.derivative_mode, s.fd_step);
    const bool admissible = max_r2 <= bound && max_r4 <= bound;
    std::cout << "# max_abs_r2=" << qem::fmt17(max_r2) << " max_abs_r4=" << qem::fmt17(max_r4)
              << " admissible=" << (admissible ? "true" : "false") << "\n";
    if (!admissible)
        std::cout << "# pair is not an exact solution candidate: rot E + mu dH/dt and div(mu H) "
                     "must vanish\n";
    return admissible ? kExitPass : kExitToleranceFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternionic Maxwell verification harness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QEM_VERSION);

    std::uint64_t seed = 42;
    int count = 1000;
    auto* identities = app.add_subcommand("identities", "run the seeded identity property suite");
    identities->add_option("--seed", seed, "rng seed");
    identities->add_option("--count", count, "random trials per identity");

    std::string scenario_path, out_path;
    auto* residual = app.add_subcommand("residual", "evaluate all formulations over a scenario");
    residual->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    residual->add_option("--out", out_path, "write the JSON report here instead of stdout");

    std::string conv_scenario, h_text;
    auto* convergence =
        app.add_subcommand("convergence", "fit the order of the fd oracle against jets");
    convergence->set_help_flag("--help", "print help"); // frees -h for the step list
    convergence->add_option("--scenario", conv_scenario, "scenario JSON file")->required();
    convergence->add_option("--h", h_text, "comma-separated decreasing step sizes")->required();

    std::string sources_scenario;
    auto* sources = app.add_subcommand("sources", "print manufactured sources over the grid");
    sources->add_option("--scenario", sources_scenario, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (app.got_subcommand(identities)) return cmd_identities(seed, count);
        if (app.got_subcommand(residual)) return cmd_residual(scenario_path, out_path);
        if (app.got_subcommand(convergence)) return cmd_convergence(conv_scenario, h_text);
        if (app.got_subcommand(sources)) return cmd_sources(sources_scenario);
    } catch (const qem::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const qem::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const qem::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
