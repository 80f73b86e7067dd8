#pragma once

#include <cmath>
#include <limits>

#include <json.hpp>

#include "pademor/pade/lspade.hpp"

namespace pademor::pade {

using json = nlohmann::json;

namespace detail {
inline json pair(cplx c) { return json::array({c.real(), c.imag()}); }
inline cplx unpair(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ArgumentError("expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace detail

inline json to_json(const PadeApproximant& a) {
    json num = json::array();
    for (const auto& p : a.numerator()) {
        json dofs = json::array();
        for (const auto& v : p.values()) dofs.push_back(detail::pair(v));
        num.push_back(std::move(dofs));
    }
    json den = json::array();
    for (const auto& c : a.denominator().coeffs) den.push_back(detail::pair(c));
    const auto& d = a.diagnostics();
    return {
        {"z0", detail::pair(a.z0())},
        {"M", a.M()},
        {"N", a.N()},
        {"denominator", std::move(den)},
        {"numerator", std::move(num)},
        {"diagnostics",
         {{"smallest_eigenvalue", d.smallest_eigenvalue},
          {"spectral_gap", detail::finite_or_null(d.spectral_gap)},
          {"gramian_norm", d.gramian_norm},
          {"degenerate", d.degenerate},
          {"spectrum", d.spectrum}}},
    };
}

// The space is not serialized; the caller supplies the one the DOFs live in.
inline PadeApproximant approximant_from_json(const json& j, SpacePtr space) {
    if (!space) throw ArgumentError("approximant_from_json: null space");
    const cplx z0 = detail::unpair(j.at("z0"));
    cvector q;
    for (const auto& c : j.at("denominator")) q.push_back(detail::unpair(c));
    std::vector<SpaceVector> p;
    for (const auto& dofs : j.at("numerator")) {
        cvector v;
        v.reserve(dofs.size());
        for (const auto& c : dofs) v.push_back(detail::unpair(c));
        p.emplace_back(space, std::move(v));
    }
    PadeDiagnostics d;
    const auto& dj = j.at("diagnostics");
    d.smallest_eigenvalue = dj.at("smallest_eigenvalue").get<double>();
    d.spectral_gap = dj.at("spectral_gap").is_null() ? std::numeric_limits<double>::infinity()
                                                      : dj.at("spectral_gap").get<double>();
    d.gramian_norm = dj.at("gramian_norm").get<double>();
    d.degenerate = dj.at("degenerate").get<bool>();
    d.spectrum = dj.at("spectrum").get<std::vector<double>>();
    return {std::move(p), ShiftedPolynomial{z0, std::move(q)}, std::move(d)};
}

}  // namespace pademor::pade
