#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "qem/scenario.hpp"
#include "qem/version.hpp"

namespace qem {

// 17 significant digits: enough to round-trip any double, and the same bytes
// on every run, which is what makes reports diffable in CI.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

// Minimal JSON emitter with caller-controlled key order. Reports must be
// byte-stable for a fixed (scenario, seed, version), so we do not round-trip
// them through a DOM.
class JsonWriter {
public:
    void begin_object() {
        comma();
        out_ += '{';
        fresh_ = true;
    }
    void end_object() {
        out_ += '}';
        fresh_ = false;
    }
    void begin_array() {
        comma();
        out_ += '[';
        fresh_ = true;
    }
    void end_array() {
        out_ += ']';
        fresh_ = false;
    }
    void key(const std::string& k) {
        comma();
        out_ += '"';
        out_ += k;
        out_ += "\":";
        fresh_ = true;
    }
    void value(double v) {
        comma();
        out_ += fmt17(v);
        fresh_ = false;
    }
    void value(std::uint64_t v) {
        comma();
        out_ += std::to_string(v);
        fresh_ = false;
    }
    void value(int v) {
        comma();
        out_ += std::to_string(v);
        fresh_ = false;
    }
    void value(bool v) {
        comma();
        out_ += v ? "true" : "false";
        fresh_ = false;
    }
    void value(const std::string& s) {
        comma();
        out_ += '"';
        for (char c : s) {
            if (c == '"' || c == '\\') {
                out_ += '\\';
                out_ += c;
            } else if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned char>(c));
                out_ += buf;
            } else {
                out_ += c;
            }
        }
        out_ += '"';
        fresh_ = false;
    }

    const std::string& str() const { return out_; }

private:
    void comma() {
        if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[' &&
            out_.back() != ':')
            out_ += ',';
        fresh_ = false;
    }

    std::string out_;
    bool fresh_ = true;
};

} // namespace detail

struct NormPair {
    double max = 0.0, rms = 0.0;
};

// Accumulates max and rms of a per-point scalar deviation.
class NormAccumulator {
public:
    void add(double v) {
        if (v > max_) max_ = v;
        sumsq_ += v * v;
        ++n_;
    }
    NormPair result() const {
        return {max_, n_ ? std::sqrt(sumsq_ / static_cast<double>(n_)) : 0.0};
    }
    double max() const { return max_; }

private:
    double max_ = 0.0;
    double sumsq_ = 0.0;
    std::size_t n_ = 0;
};

struct ResidualReport {
    std::string version = QEM_VERSION;
    std::string scenario;
    std::string units;
    std::string derivative_mode;
    double fd_step = 0.0;
    std::uint64_t seed = 0;
    Box4 box;
    std::array<int, 4> samples{};
    std::uint64_t points = 0;

    bool manufactured_rho = false;
    bool manufactured_j = false;
    double adm_max_r2 = 0.0; // admissibility of a manufactured pair
    double adm_max_r4 = 0.0;

    NormPair r1, r2, r3, r4;
    NormPair rewrite_e, rewrite_h;
    NormPair min11, min12, min21, min22, minq1, minq2;
    NormPair maxmain;
    std::optional<NormPair> vacuum; // present only for source-free vacuum runs

    double decomposition_max = 0.0;
    double chain_q1_max = 0.0;
    double chain_q2_max = 0.0;
    double m_term_max = 0.0;
    double reconstruction_max = 0.0;
    double grad_identity_c_max = 0.0;
    double grad_identity_w_max = 0.0;
    double rewrite_scaling_max = 0.0;
    double vacuum_agreement_max = 0.0; // only meaningful when vacuum present

    bool solution_checked = false; // true when sources were manufactured
    bool pass = true;
    std::vector<std::string> failures;

    std::string to_json() const {
        detail::JsonWriter w;
        w.begin_object();
        w.key("version");
        w.value(version);
        w.key("scenario");
        w.value(scenario);
        w.key("units");
        w.value(units);
        w.key("derivative_mode");
        w.value(derivative_mode);
        w.key("fd_step");
        w.value(fd_step);
        w.key("seed");
        w.value(seed);
        w.key("grid");
        w.begin_object();
        w.key("box");
        w.begin_object();
        const char* axis_names[4] = {"t", "x1", "x2", "x3"};
        for (int i = 0; i < 4; ++i) {
            w.key(axis_names[i]);
            w.begin_array();
            w.value(box.axis(i).lo);
            w.value(box.axis(i).hi);
            w.end_array();
        }
        w.end_object();
        w.key("samples");
        w.begin_array();
        for (int s : samples) w.value(s);
        w.end_array();
        w.key("points");
        w.value(points);
        w.end_object();

        w.key("manufactured");
        w.begin_object();
        w.key("rho");
        w.value(manufactured_rho);
        w.key("j");
        w.value(manufactured_j);
        if (manufactured_rho || manufactured_j) {
            w.key("max_abs_r2");
            w.value(adm_max_r2);
            w.key("max_abs_r4");
            w.value(adm_max_r4);
        }
        w.end_object();

        auto pair = [&w](const char* name, const NormPair& p) {
            w.key(name);
            w.begin_object();
            w.key("max");
            w.value(p.max);
            w.key("rms");
            w.value(p.rms);
            w.end_object();
        };
        w.key("formulations");
        w.begin_object();
        w.key("classical");
        w.begin_object();
        pair("r1", r1);
        pair("r2", r2);
        pair("r3", r3);
        pair("r4", r4);
        w.end_object();
        w.key("divergence_rewrite");
        w.begin_object();
        pair("e", rewrite_e);
        pair("h", rewrite_h);
        w.end_object();
        pair("min11", min11);
        pair("min12", min12);
        pair("min21", min21);
        pair("min22", min22);
        pair("minq1", minq1);
        pair("minq2", minq2);
        pair("maxmain", maxmain);
        if (vacuum) pair("vacuum", *vacuum);
        w.end_object();

        w.key("cross_checks");
        w.begin_object();
        w.key("decomposition_max_dev");
        w.value(decomposition_max);
        w.key("chain_minq1_max_rel_dev");
        w.value(chain_q1_max);
        w.key("chain_minq2_max_rel_dev");
        w.value(chain_q2_max);
        w.key("m_term_identity_max");
        w.value(m_term_max);
        w.key("reconstruction_max");
        w.value(reconstruction_max);
        w.key("gradient_identity_c_max");
        w.value(grad_identity_c_max);
        w.key("gradient_identity_w_max");
        w.value(grad_identity_w_max);
        w.key("divergence_rewrite_scaling_max");
        w.value(rewrite_scaling_max);
        if (vacuum) {
            w.key("vacuum_agreement_max");
            w.value(vacuum_agreement_max);
        }
        w.end_object();

        w.key("checks");
        w.begin_object();
        w.key("solution_checked");
        w.value(solution_checked);
        w.key("pass");
        w.value(pass);
        w.key("failures");
        w.begin_array();
        for (const auto& f : failures) w.value(f);
        w.end_array();
        w.end_object();

        w.end_object();
        std::string out = w.str();
        out += '\n';
        return out;
    }
};

struct IdentityResult {
    std::string name;
    int count = 0;
    double max_dev = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentityReport {
    std::string version = QEM_VERSION;
    std::uint64_t seed = 0;
    int count = 0;
    std::vector<IdentityResult> results;
    bool pass = true;

    std::string to_text() const {
        std::string out;
        out += "identity suite  version=" + version + "  seed=" + std::to_string(seed) +
               "  count=" + std::to_string(count) + "\n";
        for (const auto& r : results) {
            std::string name = r.name;
            if (name.size() < 34) name.resize(34, ' ');
            out += name + " max_dev=" + fmt17(r.max_dev) + "  tol=" + fmt17(r.tolerance) +
                   (r.pass ? "  PASS" : "  FAIL") + "\n";
        }
        out += pass ? "all identities PASS\n" : "identity suite FAIL\n";
        return out;
    }
};

struct ConvergenceReport {
    std::vector<double> h;
    std::vector<double> max_err;
    double fitted_order = 0.0;
    bool roundoff_limited = false;

    std::string to_text() const {
        std::string out;
        for (std::size_t i = 0; i < h.size(); ++i)
            out += "h=" + fmt17(h[i]) + "  max_err=" + fmt17(max_err[i]) + "\n";
        if (roundoff_limited)
            out += "errors at round-off level; order fit not meaningful\n";
        else
            out += "fitted_order=" + fmt17(fitted_order) + "\n";
        return out;
    }
};

} // namespace qem
