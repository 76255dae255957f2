#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qem/errors.hpp"
#include "qem/expr.hpp"
#include "qem/medium.hpp"

namespace qem {

struct AxisRange {
    double lo = 0.0, hi = 1.0;

    bool degenerate() const { return lo == hi; }
};

struct Box4 {
    AxisRange t, x1, x2, x3;

    const AxisRange& axis(int i) const {
        switch (i) {
        case 0: return t;
        case 1: return x1;
        case 2: return x2;
        default: return x3;
        }
    }
};

// A source definition: either explicit expressions or "manufactured",
// meaning the harness derives it from (E, H, medium).
struct SourceSpec {
    bool manufactured = false;
    std::vector<Expr> components; // 1 for rho, 3 for j (when not manufactured)
};

struct Scenario {
    std::string name;
    UnitSystem units = UnitSystem::natural();
    Expr eps_r = Expr::constant(1.0);
    Expr mu_r = Expr::constant(1.0);
    std::array<Expr, 3> E{Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0)};
    std::array<Expr, 3> H{Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0)};
    SourceSpec rho, j;
    Box4 box;
    std::array<int, 4> samples{5, 5, 5, 5};
    DerivativeMode derivative_mode = DerivativeMode::Jet;
    double fd_step = 1e-4;
    std::uint64_t seed = 0;
};

namespace detail {

inline Expr parse_expr_field(const nlohmann::json& v, const std::string& where) {
    if (v.is_number()) return Expr::constant(v.get<double>());
    if (!v.is_string()) throw config_error(where + ": expected an expression string");
    try {
        return Expr::parse(v.get<std::string>());
    } catch (const parse_error& e) {
        throw config_error(where + ": " + e.what());
    }
}

inline std::array<Expr, 3> parse_expr_triple(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3)
        throw config_error(where + ": expected an array of 3 expression strings");
    return {parse_expr_field(v[0], where + "[0]"), parse_expr_field(v[1], where + "[1]"),
            parse_expr_field(v[2], where + "[2]")};
}

inline AxisRange parse_axis(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw config_error(where + ": expected [lo, hi]");
    AxisRange r{v[0].get<double>(), v[1].get<double>()};
    if (!(r.lo <= r.hi)) throw config_error(where + ": lo must not exceed hi");
    return r;
}

} // namespace detail

// Parses the scenario JSON document. Keys: name, units, medium {eps_r, mu_r},
// fields {E, H, rho, j}, box {t, x1, x2, x3}, samples, derivative_mode,
// fd_step, seed. rho/j accept "manufactured". A scalar `samples` applies to
// every non-degenerate axis; degenerate axes always get the single endpoint.
inline Scenario parse_scenario_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("scenario: top-level JSON object expected");

    Scenario s;
    if (doc.contains("name")) s.name = doc["name"].get<std::string>();
    if (doc.contains("units")) {
        const std::string u = doc["units"].get<std::string>();
        if (u == "natural") s.units = UnitSystem::natural();
        else if (u == "SI") s.units = UnitSystem::si();
        else throw config_error("scenario: units must be \"natural\" or \"SI\"");
    }

    if (!doc.contains("medium") || !doc["medium"].is_object())
        throw config_error("scenario: missing medium {eps_r, mu_r}");
    const auto& med = doc["medium"];
    if (!med.contains("eps_r") || !med.contains("mu_r"))
        throw config_error("scenario: medium requires eps_r and mu_r");
    s.eps_r = detail::parse_expr_field(med["eps_r"], "medium.eps_r");
    s.mu_r = detail::parse_expr_field(med["mu_r"], "medium.mu_r");

    if (!doc.contains("fields") || !doc["fields"].is_object())
        throw config_error("scenario: missing fields {E, H, ...}");
    const auto& flds = doc["fields"];
    if (!flds.contains("E") || !flds.contains("H"))
        throw config_error("scenario: fields require E and H");
    s.E = detail::parse_expr_triple(flds["E"], "fields.E");
    s.H = detail::parse_expr_triple(flds["H"], "fields.H");

    auto parse_source = [&](const char* key, bool vector_valued) {
        SourceSpec src;
        if (!flds.contains(key)) {
            // Absent source means zero.
            src.components.assign(vector_valued ? 3 : 1, Expr::constant(0.0));
            return src;
        }
        const auto& v = flds[key];
        if (v.is_string() && v.get<std::string>() == "manufactured") {
            src.manufactured = true;
            return src;
        }
        if (vector_valued) {
            const auto triple = detail::parse_expr_triple(v, std::string("fields.") + key);
            src.components.assign(triple.begin(), triple.end());
        } else {
            src.components.push_back(detail::parse_expr_field(v, std::string("fields.") + key));
        }
        return src;
    };
    s.rho = parse_source("rho", false);
    s.j = parse_source("j", true);

    if (doc.contains("box")) {
        const auto& b = doc["box"];
        if (!b.is_object()) throw config_error("scenario: box must be an object");
        if (b.contains("t")) s.box.t = detail::parse_axis(b["t"], "box.t");
        if (b.contains("x1")) s.box.x1 = detail::parse_axis(b["x1"], "box.x1");
        if (b.contains("x2")) s.box.x2 = detail::parse_axis(b["x2"], "box.x2");
        if (b.contains("x3")) s.box.x3 = detail::parse_axis(b["x3"], "box.x3");
    }

    if (doc.contains("samples")) {
        const auto& sm = doc["samples"];
        if (sm.is_number_integer()) {
            const int n = sm.get<int>();
            if (n < 1) throw config_error("scenario: samples must be >= 1");
            for (int i = 0; i < 4; ++i)
                s.samples[static_cast<std::size_t>(i)] = s.box.axis(i).degenerate() ? 1 : n;
        } else if (sm.is_array() && sm.size() == 4) {
            for (std::size_t i = 0; i < 4; ++i) s.samples[i] = sm[i].get<int>();
        } else {
            throw config_error("scenario: samples must be an integer or an array of 4");
        }
    } else {
        for (int i = 0; i < 4; ++i)
            if (s.box.axis(i).degenerate()) s.samples[static_cast<std::size_t>(i)] = 1;
    }

    if (doc.contains("derivative_mode")) {
        const std::string m = doc["derivative_mode"].get<std::string>();
        if (m == "jet") s.derivative_mode = DerivativeMode::Jet;
        else if (m == "fd") s.derivative_mode = DerivativeMode::FiniteDifference;
        else throw config_error("scenario: derivative_mode must be \"jet\" or \"fd\"");
    }
    if (doc.contains("fd_step")) {
        s.fd_step = doc["fd_step"].get<double>();
        if (!(s.fd_step > 0.0)) throw config_error("scenario: fd_step must be positive");
    }
    if (doc.contains("seed")) s.seed = doc["seed"].get<std::uint64_t>();

    if (s.name.empty()) throw config_error("scenario: missing name");
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("scenario: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str());
}

} // namespace qem
