#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "monomial/catalog.hpp"
#include "monomial/heun.hpp"

namespace monomial::emit {

using json = nlohmann::json;

/// "p/q" in lowest terms, "p" when the denominator is one.
inline std::string rational_string(const Rational& r) { return to_string(r); }

/// Decimal value rounded to 15 significant digits; null for NaN or infinity.
inline json float_json(double v) {
    if (!std::isfinite(v)) return nullptr;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::stod(buf);
}

/// Terms in the series' own order: ascending, or descending for descending series.
inline json terms_json(const GeneralizedSeries& s) {
    json arr = json::array();
    for (const auto& [e, c] : s.ordered_terms())
        arr.push_back({{"exponent", rational_string(e)}, {"coefficient", rational_string(c)}});
    return arr;
}

inline json series_json(const GeneralizedSeries& s) {
    json out{{"direction", to_string(s.direction())}, {"terms", terms_json(s)}};
    if (s.frontier()) out["frontier"] = rational_string(*s.frontier());
    return out;
}

inline GeneralizedSeries series_from_terms(const json& terms, Direction dir = Direction::ascending) {
    GeneralizedSeries s(dir);
    for (const auto& t : terms)
        s.add(parse_rational(t.at("exponent").get<std::string>()), parse_rational(t.at("coefficient").get<std::string>()));
    return s;
}

inline json solution_json(const Solution& sol) {
    json out{{"lambda", rational_string(sol.lambda)}, {"terminated", sol.terminated}, {"terms", terms_json(sol.series)}};
    if (sol.series.frontier()) out["frontier"] = rational_string(*sol.series.frontier());
    if (sol.particular) out["particular"] = true;
    return out;
}

inline json diagonal_json(const DiagonalOp& f) {
    json arr = json::array();
    for (int k = 0; k <= f.degree(); ++k) arr.push_back(rational_string(f.polynomial().coeff(k)));
    return arr;
}

inline json split_json(const OperatorSplit& s) {
    json p = json::array();
    for (const auto& t : s.P.terms()) p.push_back({{"c", rational_string(t.c)}, {"i", t.i}, {"j", t.j}});
    json out{{"shift", s.shift}, {"F", diagonal_json(s.F)}, {"P", p}};
    if (s.scaled_source) out["source"] = series_json(*s.scaled_source);
    return out;
}

inline json indicial_json(const IndicialData& d) {
    json roots = json::array();
    for (const auto& r : d.rational_roots) roots.push_back(rational_string(r));
    json out{{"rational", roots}};
    if (d.irrational_root_report) out["irrational"] = d.irrational_root_report->description;
    return out;
}

inline json report_json(const NormalizationReport& r) {
    json arr = json::array();
    for (const auto& c : r.candidates)
        arr.push_back({{"shift", c.shift}, {"f_degree", c.f_degree}, {"rational_roots", c.rational_root_count}, {"full", c.full}});
    return arr;
}

inline json comparison_json(const catalog::ComparisonReport& r) {
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = rational_string(v);
    json out{{"family", r.name}, {"params", params}, {"route", r.route}, {"terms_compared", r.terms_compared},
             {"match", r.match}};
    if (r.first_mismatch)
        out["first_mismatch"] = {{"exponent", rational_string(r.first_mismatch->exponent)},
                                 {"expected", rational_string(r.first_mismatch->expected)},
                                 {"got", rational_string(r.first_mismatch->got)}};
    if (!r.error_name.empty()) out["error"] = r.error_name;
    if (!r.direct_error_name.empty()) out["direct_error"] = r.direct_error_name;
    return out;
}

inline json scan_row_json(const heun::ScanRow& r) {
    return {{"n", r.n},
            {"m", r.m},
            {"s", rational_string(r.s)},
            {"energy_ratio", rational_string(r.energy_ratio)},
            {"normalizable", r.normalizable},
            {"decay_exponent", rational_string(r.decay_exponent)},
            {"f", terms_json(r.f_coeffs)}};
}

} // namespace monomial::emit
