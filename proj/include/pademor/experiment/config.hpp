#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pademor/core/types.hpp"
#include "pademor/pade/lspade.hpp"

namespace pademor::experiment {

using json = nlohmann::json;

// Invalid configuration; `field` is a dotted path into the JSON document.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& msg)
        : std::runtime_error("config field '" + field + "': " + msg), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class ProblemKind { model, transmission, scattering, stochastic };
enum class TruthKind { fd, modal, spectral };
enum class RhoRule { automatic, fixed, distance };
enum class WeightRule { sqrt_re_z0, re_z0, fixed };

struct ModelParams {
    std::string load = "bubble_wave";  // bubble_wave | xy
    double nu2 = 51.0;
    double direction_deg = 30.0;
};

struct ModalParams {
    int cutoff = 1600;
    std::string load = "xy";  // xy | unit
};

struct SpectralParams {
    std::vector<double> poles;
    std::vector<double> loads;  // empty: all ones
};

struct TransmissionParams {
    double theta_deg = 29.0;
    double n1 = 2.0;
    double n2 = 1.0;
    double kappa = 11.0;
    index_t pole_count = 12;
};

struct ScatteringParams {
    double theta_deg = 0.0;
    double half_width = 2.0;
    double obstacle = 0.5;
};

struct ErrorStudy {
    std::vector<double> z;
    index_t m_min = 1;
    index_t m_max = 10;
    std::vector<index_t> n_values;
};

struct StochasticParams {
    index_t samples = 100000;
    double t_min = -5.0;
    double t_max = 5.0;
    index_t t_points = 41;
    bool write_samples = true;
};

struct ExperimentConfig {
    ProblemKind problem = ProblemKind::model;
    TruthKind truth = TruthKind::fd;
    index_t grid = 32;
    double kmin = 0.0, kmax = 0.0;
    cplx z0{};
    std::vector<std::pair<index_t, index_t>> degrees;
    std::optional<index_t> e_fixed;  // nullopt: E = M + N
    RhoRule rho_rule = RhoRule::automatic;
    double rho_value = 0.0;
    WeightRule weight_rule = WeightRule::sqrt_re_z0;
    double weight_value = 0.0;
    pade::DenominatorMethod method = pade::DenominatorMethod::taylor_qr;
    index_t sweep_intervals = 100;
    std::optional<ErrorStudy> error_study;
    bool roots = true;
    std::uint64_t seed = 0;
    StochasticParams stochastic;
    ModelParams model;
    ModalParams modal;
    SpectralParams spectral;
    TransmissionParams transmission;
    ScatteringParams scattering;
    std::string output = "out";
    bool svg = false;

    double weight() const {
        switch (weight_rule) {
            case WeightRule::sqrt_re_z0: return std::sqrt(z0.real());
            case WeightRule::re_z0: return z0.real();
            case WeightRule::fixed: return weight_value;
        }
        return 0.0;
    }

    index_t e_for(index_t M, index_t N) const { return e_fixed ? *e_fixed : M + N; }

    // rho for an approximant evaluated around z (distance rule)
    double rho_for(std::optional<double> z) const {
        switch (rho_rule) {
            case RhoRule::automatic: return pade::PadeConfig::default_rho(kmin, kmax, z0);
            case RhoRule::fixed: return rho_value;
            case RhoRule::distance: {
                const double at = z ? *z : error_study->z.front();
                return std::abs(cplx(at) - z0);
            }
        }
        return 0.0;
    }

    pade::PadeConfig pade_config(index_t M, index_t N, std::optional<double> z = std::nullopt) const {
        pade::PadeConfig c;
        c.M = M;
        c.N = N;
        c.E = e_for(M, N);
        c.rho = rho_for(z);
        c.z0 = z0;
        c.method = method;
        return c;
    }
};

inline const char* to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::model: return "model";
        case ProblemKind::transmission: return "transmission";
        case ProblemKind::scattering: return "scattering";
        case ProblemKind::stochastic: return "stochastic";
    }
    return "?";
}

inline const char* to_string(TruthKind k) {
    switch (k) {
        case TruthKind::fd: return "fd";
        case TruthKind::modal: return "modal";
        case TruthKind::spectral: return "spectral";
    }
    return "?";
}

namespace detail {

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be a JSON object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }
    const json& at(const std::string& key) {
        if (!has(key)) throw ConfigError(field(key), "required field is missing");
        return j_.at(key);
    }

    double number(const std::string& key) { return as_number(at(key), field(key)); }
    double number(const std::string& key, double def) { return has(key) ? number(key) : def; }

    index_t count(const std::string& key, index_t min_value) { return as_count(at(key), field(key), min_value); }
    index_t count(const std::string& key, index_t def, index_t min_value) {
        return has(key) ? count(key, min_value) : def;
    }

    std::string text(const std::string& key, const std::string& def, std::initializer_list<const char*> allowed) {
        if (!has(key)) return def;
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(field(key), "must be a string");
        const auto s = v.get<std::string>();
        if (allowed.size() == 0) return s;
        std::string list;
        for (const char* a : allowed) {
            if (s == a) return s;
            list += list.empty() ? a : std::string(", ") + a;
        }
        throw ConfigError(field(key), "'" + s + "' is not one of: " + list);
    }

    bool flag(const std::string& key, bool def) {
        if (!has(key)) return def;
        if (!j_.at(key).is_boolean()) throw ConfigError(field(key), "must be true or false");
        return j_.at(key).get<bool>();
    }

    void reject_unknown() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) throw ConfigError(field(k), "unknown field");
    }

    static double as_number(const json& v, const std::string& f) {
        if (!v.is_number()) throw ConfigError(f, "must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(f, "must be finite");
        return x;
    }

    static index_t as_count(const json& v, const std::string& f, index_t min_value) {
        if (!v.is_number_integer()) throw ConfigError(f, "must be an integer");
        const auto x = v.get<long long>();
        if (x < static_cast<long long>(min_value))
            throw ConfigError(f, "must be at least " + std::to_string(min_value));
        return static_cast<index_t>(x);
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline std::vector<double> number_list(const json& v, const std::string& f) {
    if (!v.is_array()) throw ConfigError(f, "must be an array of numbers");
    std::vector<double> out;
    for (index_t k = 0; k < v.size(); ++k) out.push_back(Reader::as_number(v[k], f + "[" + std::to_string(k) + "]"));
    return out;
}

}  // namespace detail

// Parse and validate. Defaults depend on the problem kind.
inline ExperimentConfig parse_config(const json& j) {
    using detail::Reader;
    if (j.is_null() || (j.is_object() && j.empty())) throw ConfigError("<root>", "configuration is empty");
    Reader r(j, "");
    ExperimentConfig c;

    const auto problem = r.text("problem", "", {"model", "transmission", "scattering", "stochastic"});
    if (problem.empty()) throw ConfigError("problem", "required field is missing");
    if (problem == "model") c.problem = ProblemKind::model;
    if (problem == "transmission") c.problem = ProblemKind::transmission;
    if (problem == "scattering") c.problem = ProblemKind::scattering;
    if (problem == "stochastic") c.problem = ProblemKind::stochastic;

    const bool helmholtz = c.problem == ProblemKind::model || c.problem == ProblemKind::stochastic;
    const auto truth = r.text("truth", c.problem == ProblemKind::stochastic ? "modal" : "fd", {"fd", "modal", "spectral"});
    c.truth = truth == "fd" ? TruthKind::fd : truth == "modal" ? TruthKind::modal : TruthKind::spectral;
    if (!helmholtz && c.truth != TruthKind::fd)
        throw ConfigError("truth", std::string("problem '") + problem + "' only has an fd truth");

    c.grid = r.count("grid", c.problem == ProblemKind::scattering ? 80 : 32, 2);

    {
        const auto k = detail::number_list(r.at("interval"), "interval");
        if (k.size() != 2) throw ConfigError("interval", "must be [kmin, kmax]");
        c.kmin = k[0];
        c.kmax = k[1];
        if (!(c.kmin < c.kmax)) throw ConfigError("interval", "need kmin < kmax");
        if (!(c.kmin > 0.0)) throw ConfigError("interval", "need kmin > 0");
    }
    {
        const auto z = detail::number_list(r.at("z0"), "z0");
        if (z.size() != 2) throw ConfigError("z0", "must be [re, im]");
        c.z0 = {z[0], z[1]};
        if (!(c.z0.real() > 0.0)) throw ConfigError("z0", "real part must be positive");
        if (c.z0.imag() == 0.0) throw ConfigError("z0", "imaginary part must be nonzero");
    }
    {
        const auto& d = r.at("degrees");
        if (!d.is_array() || d.empty()) throw ConfigError("degrees", "must be a nonempty array of [M, N] pairs");
        for (index_t k = 0; k < d.size(); ++k) {
            const std::string f = "degrees[" + std::to_string(k) + "]";
            if (!d[k].is_array() || d[k].size() != 2) throw ConfigError(f, "must be [M, N]");
            c.degrees.emplace_back(Reader::as_count(d[k][0], f + "[0]", 0), Reader::as_count(d[k][1], f + "[1]", 0));
        }
    }
    if (r.has("E")) {
        const auto& e = r.at("E");
        if (e.is_string()) {
            if (e.get<std::string>() != "M+N") throw ConfigError("E", "must be \"M+N\" or an integer");
        } else {
            c.e_fixed = Reader::as_count(e, "E", 0);
        }
    }
    if (r.has("rho")) {
        const auto& v = r.at("rho");
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "auto") c.rho_rule = RhoRule::automatic;
            else if (s == "distance") c.rho_rule = RhoRule::distance;
            else throw ConfigError("rho", "must be \"auto\", \"distance\" or a positive number");
        } else {
            c.rho_rule = RhoRule::fixed;
            c.rho_value = Reader::as_number(v, "rho");
            if (!(c.rho_value > 0.0)) throw ConfigError("rho", "must be positive");
        }
    }
    c.weight_rule = c.problem == ProblemKind::scattering ? WeightRule::re_z0 : WeightRule::sqrt_re_z0;
    if (r.has("weight")) {
        const auto& v = r.at("weight");
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "sqrt_re_z0") c.weight_rule = WeightRule::sqrt_re_z0;
            else if (s == "re_z0") c.weight_rule = WeightRule::re_z0;
            else throw ConfigError("weight", "must be \"sqrt_re_z0\", \"re_z0\" or a positive number");
        } else {
            c.weight_rule = WeightRule::fixed;
            c.weight_value = Reader::as_number(v, "weight");
            if (!(c.weight_value > 0.0)) throw ConfigError("weight", "must be positive");
        }
    }
    c.method = r.text("denominator", "taylor_qr", {"taylor_qr", "gramian"}) == "gramian"
                   ? pade::DenominatorMethod::gramian
                   : pade::DenominatorMethod::taylor_qr;

    if (r.has("sweep")) {
        Reader s(r.at("sweep"), "sweep");
        c.sweep_intervals = s.count("intervals", 100, 0);
        s.reject_unknown();
    }
    if (r.has("error_study")) {
        Reader s(r.at("error_study"), "error_study");
        ErrorStudy e;
        e.z = detail::number_list(s.at("z"), "error_study.z");
        if (e.z.empty()) throw ConfigError("error_study.z", "needs at least one evaluation point");
        const auto& m = s.at("M");
        if (!m.is_array() || m.size() != 2) throw ConfigError("error_study.M", "must be [M_min, M_max]");
        e.m_min = Reader::as_count(s.at("M")[0], "error_study.M[0]", 0);
        e.m_max = Reader::as_count(s.at("M")[1], "error_study.M[1]", e.m_min);
        const auto& n = s.at("N");
        if (!n.is_array() || n.empty()) throw ConfigError("error_study.N", "must be a nonempty array");
        for (index_t k = 0; k < n.size(); ++k)
            e.n_values.push_back(Reader::as_count(n[k], "error_study.N[" + std::to_string(k) + "]", 0));
        s.reject_unknown();
        c.error_study = std::move(e);
    }
    c.roots = r.flag("roots", true);
    if (r.has("seed")) {
        const auto& s = r.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ConfigError("seed", "must be a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }

    if (r.has("stochastic")) {
        Reader s(r.at("stochastic"), "stochastic");
        c.stochastic.samples = s.count("samples", c.stochastic.samples, 1);
        if (s.has("t")) {
            const auto t = detail::number_list(s.at("t"), "stochastic.t");
            if (t.size() != 3 || !s.at("t")[2].is_number_integer()) throw ConfigError("stochastic.t", "must be [t_min, t_max, points]");
            c.stochastic.t_min = t[0];
            c.stochastic.t_max = t[1];
            c.stochastic.t_points = Reader::as_count(s.at("t")[2], "stochastic.t[2]", 1);
            if (!(t[0] <= t[1])) throw ConfigError("stochastic.t", "need t_min <= t_max");
        }
        c.stochastic.write_samples = s.flag("write_samples", true);
        s.reject_unknown();
    }
    if (r.has("model")) {
        Reader s(r.at("model"), "model");
        c.model.load = s.text("load", c.model.load, {"bubble_wave", "xy"});
        c.model.nu2 = s.number("nu2", c.model.nu2);
        if (!(c.model.nu2 > 0.0)) throw ConfigError("model.nu2", "must be positive");
        c.model.direction_deg = s.number("direction_deg", c.model.direction_deg);
        s.reject_unknown();
    }
    if (r.has("modal")) {
        Reader s(r.at("modal"), "modal");
        c.modal.cutoff = static_cast<int>(s.count("cutoff", static_cast<index_t>(c.modal.cutoff), 2));
        c.modal.load = s.text("load", c.modal.load, {"xy", "unit"});
        s.reject_unknown();
    }
    if (r.has("spectral")) {
        Reader s(r.at("spectral"), "spectral");
        c.spectral.poles = detail::number_list(s.at("poles"), "spectral.poles");
        if (s.has("loads")) c.spectral.loads = detail::number_list(s.at("loads"), "spectral.loads");
        s.reject_unknown();
    }
    if (r.has("transmission")) {
        Reader s(r.at("transmission"), "transmission");
        auto& t = c.transmission;
        t.theta_deg = s.number("theta_deg", t.theta_deg);
        t.n1 = s.number("n1", t.n1);
        t.n2 = s.number("n2", t.n2);
        t.kappa = s.number("kappa", t.kappa);
        t.pole_count = s.count("pole_count", t.pole_count, 1);
        if (!(t.theta_deg >= 0.0 && t.theta_deg < 90.0)) throw ConfigError("transmission.theta_deg", "must be in [0, 90)");
        if (!(t.n1 > 0.0)) throw ConfigError("transmission.n1", "must be positive");
        if (!(t.n2 > 0.0)) throw ConfigError("transmission.n2", "must be positive");
        if (!(t.kappa > 0.0)) throw ConfigError("transmission.kappa", "must be positive");
        s.reject_unknown();
    }
    if (r.has("scattering")) {
        Reader s(r.at("scattering"), "scattering");
        auto& t = c.scattering;
        t.theta_deg = s.number("theta_deg", t.theta_deg);
        t.half_width = s.number("half_width", t.half_width);
        t.obstacle = s.number("obstacle", t.obstacle);
        if (!(t.obstacle > 0.0 && t.obstacle < t.half_width))
            throw ConfigError("scattering.obstacle", "must satisfy 0 < obstacle < half_width");
        s.reject_unknown();
    }
    c.output = r.text("output", c.output, {});
    if (c.output.empty()) throw ConfigError("output", "must not be empty");
    c.svg = r.flag("svg", false);
    r.reject_unknown();

    // cross-field checks
    if (c.problem == ProblemKind::transmission && c.grid % 2 != 0)
        throw ConfigError("grid", "transmission needs an even cell count (interface on a grid line)");
    if (c.truth == TruthKind::spectral) {
        if (c.spectral.poles.empty()) throw ConfigError("spectral.poles", "required for truth \"spectral\"");
        if (!c.spectral.loads.empty() && c.spectral.loads.size() != c.spectral.poles.size())
            throw ConfigError("spectral.loads", "must match spectral.poles in length");
    }
    if (c.rho_rule == RhoRule::distance && !c.error_study)
        throw ConfigError("rho", "\"distance\" needs error_study.z to measure |z - z0|");
    if (c.rho_rule == RhoRule::distance)
        for (double z : c.error_study->z)
            if (std::abs(cplx(z) - c.z0) == 0.0) throw ConfigError("error_study.z", "coincides with z0");
    auto check_e = [&](index_t M, index_t N, const std::string& f) {
        if (c.e_fixed && *c.e_fixed < M + N)
            throw ConfigError(f, "E = " + std::to_string(*c.e_fixed) + " is below M + N = " + std::to_string(M + N));
        if (c.e_for(M, N) < M + 1 && N > 0) throw ConfigError(f, "E must exceed M when N > 0");
    };
    for (index_t k = 0; k < c.degrees.size(); ++k)
        check_e(c.degrees[k].first, c.degrees[k].second, "degrees[" + std::to_string(k) + "]");
    if (c.error_study)
        for (index_t n : c.error_study->n_values) check_e(c.error_study->m_max, n, "error_study");
    return c;
}

// Fully resolved document: every default spelled out.
inline json to_json(const ExperimentConfig& c) {
    json j;
    j["problem"] = to_string(c.problem);
    j["truth"] = to_string(c.truth);
    j["grid"] = c.grid;
    j["interval"] = {c.kmin, c.kmax};
    j["z0"] = {c.z0.real(), c.z0.imag()};
    j["degrees"] = json::array();
    for (const auto& [m, n] : c.degrees) j["degrees"].push_back({m, n});
    if (c.e_fixed) j["E"] = *c.e_fixed;
    else j["E"] = "M+N";
    switch (c.rho_rule) {
        case RhoRule::automatic: j["rho"] = "auto"; break;
        case RhoRule::distance: j["rho"] = "distance"; break;
        case RhoRule::fixed: j["rho"] = c.rho_value; break;
    }
    switch (c.weight_rule) {
        case WeightRule::sqrt_re_z0: j["weight"] = "sqrt_re_z0"; break;
        case WeightRule::re_z0: j["weight"] = "re_z0"; break;
        case WeightRule::fixed: j["weight"] = c.weight_value; break;
    }
    j["denominator"] = c.method == pade::DenominatorMethod::gramian ? "gramian" : "taylor_qr";
    j["sweep"] = {{"intervals", c.sweep_intervals}};
    if (c.error_study)
        j["error_study"] = {{"z", c.error_study->z},
                            {"M", {c.error_study->m_min, c.error_study->m_max}},
                            {"N", c.error_study->n_values}};
    j["roots"] = c.roots;
    j["seed"] = c.seed;
    j["stochastic"] = {{"samples", c.stochastic.samples},
                       {"t", json::array({json(c.stochastic.t_min), json(c.stochastic.t_max), json(c.stochastic.t_points)})},
                       {"write_samples", c.stochastic.write_samples}};
    j["model"] = {{"load", c.model.load}, {"nu2", c.model.nu2}, {"direction_deg", c.model.direction_deg}};
    j["modal"] = {{"cutoff", c.modal.cutoff}, {"load", c.modal.load}};
    if (c.truth == TruthKind::spectral) {
        j["spectral"] = {{"poles", c.spectral.poles}};
        if (!c.spectral.loads.empty()) j["spectral"]["loads"] = c.spectral.loads;
    }
    j["transmission"] = {{"theta_deg", c.transmission.theta_deg},
                         {"n1", c.transmission.n1},
                         {"n2", c.transmission.n2},
                         {"kappa", c.transmission.kappa},
                         {"pole_count", c.transmission.pole_count}};
    j["scattering"] = {{"theta_deg", c.scattering.theta_deg},
                       {"half_width", c.scattering.half_width},
                       {"obstacle", c.scattering.obstacle}};
    j["output"] = c.output;
    j["svg"] = c.svg;
    return j;
}

// FNV-1a over the resolved document minus the output location.
inline std::string config_hash(const ExperimentConfig& c) {
    json j = to_json(c);
    j.erase("output");
    j.erase("svg");
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pademor::experiment
