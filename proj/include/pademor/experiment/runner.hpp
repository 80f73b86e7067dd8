#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "pademor/experiment/config.hpp"
#include "pademor/experiment/csv.hpp"
#include "pademor/experiment/studies.hpp"
#include "pademor/experiment/svg.hpp"
#include "pademor/maps/helmholtz_map.hpp"
#include "pademor/maps/modal_oracle.hpp"
#include "pademor/maps/scattering.hpp"
#include "pademor/maps/transmission.hpp"
#include "pademor/stochastic/sampling.hpp"

#ifndef PADEMOR_VERSION
#define PADEMOR_VERSION "0.0.0"
#endif

namespace pademor::experiment {

inline constexpr int schema_version = 1;

// Fixed CSV headers; sweep and samples append one group per (M, N).
inline const std::vector<std::string> error_vs_m_columns = {
    "z", "M", "N", "E", "rho", "error", "taylor_error", "heuristic_rate",
    "smallest_eigenvalue", "relative_gap", "degenerate", "status"};
inline const std::vector<std::string> roots_columns = {
    "M", "N", "root_index", "root_re", "root_im", "pole_index", "pole", "distance", "relative_gap"};
inline const std::vector<std::string> chf_columns = {
    "M", "N", "t", "re_phi_x", "im_phi_x", "re_phi_xp", "im_phi_xp", "err_t"};
inline const std::vector<std::string> rates_columns = {
    "M", "N", "max_err", "fitted_slope", "stderr_slope", "theoretical_slope", "noise_floor", "consistent", "unresolvable"};

inline std::vector<std::string> sweep_columns(const std::vector<std::pair<index_t, index_t>>& degrees) {
    std::vector<std::string> c = {"z", "norm_truth"};
    for (const auto& [m, n] : degrees) {
        c.push_back("norm_pade_" + degree_tag(m, n));
        c.push_back("relerr_" + degree_tag(m, n));
    }
    c.push_back("status");
    return c;
}

inline std::vector<std::string> samples_columns(const std::vector<std::pair<index_t, index_t>>& degrees) {
    std::vector<std::string> c = {"k2", "X"};
    for (const auto& [m, n] : degrees) c.push_back("X_P_" + degree_tag(m, n));
    return c;
}

// The map a run treats as ground truth, and the poles it knows about.
struct Truth {
    std::shared_ptr<maps::ResponseMap> map;
    std::vector<double> poles;  // ascending; empty when unknown
    std::vector<std::pair<std::string, std::string>> notes;
};

// f = -Lap w - nu^2 w for w = bubble * exp(-i nu d.x) on (0,pi)^2, bubble
// x1 x2 (pi-x1)(pi-x2) normalized to max 1.
inline cplx bubble_wave_load(Point x, double nu, double dir_rad) {
    const double bmax = std::pow(0.5 * pi, 4);
    const double p1 = x.x * (pi - x.x), p2 = x.y * (pi - x.y);
    const double dp1 = pi - 2.0 * x.x, dp2 = pi - 2.0 * x.y;
    const double lap_b = (-2.0 * p2 - 2.0 * p1) / bmax;
    const double d1 = std::cos(dir_rad), d2 = std::sin(dir_rad);
    const double grad_b_d = (dp1 * p2 * d1 + p1 * dp2 * d2) / bmax;
    const cplx i(0.0, 1.0);
    const cplx e = std::exp(-i * nu * (d1 * x.x + d2 * x.y));
    return e * (-lap_b + 2.0 * i * nu * grad_b_d);
}

inline cplx bubble_wave(Point x, double nu, double dir_rad) {
    const double bmax = std::pow(0.5 * pi, 4);
    const cplx i(0.0, 1.0);
    return x.x * (pi - x.x) * x.y * (pi - x.y) / bmax *
           std::exp(-i * nu * (std::cos(dir_rad) * x.x + std::sin(dir_rad) * x.y));
}

// Distinct 5-point Dirichlet eigenvalues of the (0,pi)^2 grid below `limit`.
inline std::vector<double> fd_square_spectrum(index_t cells, double limit) {
    const double h = pi / static_cast<double>(cells);
    std::vector<double> v;
    for (index_t m = 1; m < cells; ++m)
        for (index_t n = m; n < cells; ++n) {
            const double l = maps::fd_eigenvalue(static_cast<int>(m), static_cast<int>(n), h);
            if (l <= limit) v.push_back(l);
        }
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double l : v)
        if (out.empty() || l - out.back() > 1e-9 * l) out.push_back(l);
    return out;
}

inline Truth make_truth(const ExperimentConfig& c) {
    Truth t;
    const double w = c.weight();
    switch (c.problem) {
        case ProblemKind::model:
        case ProblemKind::stochastic: {
            if (c.truth == TruthKind::spectral) {
                cvector loads(c.spectral.poles.size(), 1.0);
                for (index_t k = 0; k < c.spectral.loads.size(); ++k) loads[k] = c.spectral.loads[k];
                t.map = maps::make_spectral_oracle(c.spectral.poles, loads, c.z0, w);
                t.poles = c.spectral.poles;
                std::sort(t.poles.begin(), t.poles.end());
            } else if (c.truth == TruthKind::modal) {
                const bool xy = c.modal.load == "xy";
                auto oracle = maps::make_dirichlet_square_oracle(c.z0, w, c.modal.cutoff, [xy](int m, int n) {
                    return xy ? maps::xy_load_coefficient(m, n) : 1.0;
                });
                t.poles = oracle->known_poles();
                t.map = oracle;
                t.notes.push_back({"truth", "modal Dirichlet (0,pi)^2, eigenvalues m^2+n^2 <= " +
                                                std::to_string(c.modal.cutoff) + ", load " + c.modal.load});
            } else {
                auto grid = std::make_shared<const fd::Grid>(fd::dirichlet_square(0.0, pi, c.grid));
                maps::HelmholtzProblem p;
                p.grid = grid;
                p.weight = w;
                if (c.model.load == "xy") {
                    p.load = grid->interpolate([](Point x) { return cplx(x.x * x.y); });
                } else {
                    const double nu = std::sqrt(c.model.nu2), dir = c.model.direction_deg * pi / 180.0;
                    p.load = grid->interpolate([&](Point x) { return bubble_wave_load(x, nu, dir); });
                }
                t.map = std::make_shared<maps::FdHelmholtzMap>(std::move(p), c.z0);
                t.poles = fd_square_spectrum(c.grid, 2.0 * c.kmax + std::abs(c.z0));
                t.notes.push_back({"truth", "5-point FD Dirichlet (0,pi)^2, " + std::to_string(c.grid) +
                                                " cells per side, load " + c.model.load});
            }
            break;
        }
        case ProblemKind::transmission: {
            maps::TransmissionSetup s;
            s.cells = c.grid;
            s.theta = c.transmission.theta_deg * pi / 180.0;
            s.n1 = c.transmission.n1;
            s.n2 = c.transmission.n2;
            s.kappa = c.transmission.kappa;
            auto m = maps::make_transmission_map(s, c.z0, w);
            t.poles = m->poles_near(std::min(c.transmission.pole_count, m->grid().free_nodes().size()));
            std::sort(t.poles.begin(), t.poles.end());
            t.map = m;
            t.notes.push_back({"truth", "5-point FD on (-1,1)^2, " + std::to_string(c.grid) +
                                            " cells per side, Dirichlet data from the exact plane-wave solution"});
            t.notes.push_back({"interface", "eps_r^2 on the x2 = 0 grid line = (n1^2 + n2^2)/2"});
            t.notes.push_back({"poles", "generalized eigenvalues of (K, M_eps) nearest Re(z0)"});
            break;
        }
        case ProblemKind::scattering: {
            maps::ScatteringSetup s;
            s.h = 2.0 * c.scattering.half_width / static_cast<double>(c.grid);
            s.theta = c.scattering.theta_deg * pi / 180.0;
            s.half_width = c.scattering.half_width;
            s.obstacle = c.scattering.obstacle;
            t.map = std::make_shared<maps::FdScatteringMap>(maps::scattering_grid(s), s.theta, c.z0, w);
            t.notes.push_back({"truth", "5-point FD, box [-a,a]^2 minus square obstacle, impedance outer boundary"});
            t.notes.push_back({"parameter", "z is the wavenumber k; operator K - z^2 M - i z B"});
            t.notes.push_back({"poles", "complex resonances, not tabulated"});
            break;
        }
    }
    return t;
}

struct RunSummary {
    std::vector<std::string> files;
    json manifest;
};

namespace detail {

inline std::string weight_note(const ExperimentConfig& c) {
    return fmt(c.weight()) + " (||v||_w^2 = ||grad v||^2 + w^2 ||v||^2, rule " +
           to_json(c).at("weight").dump() + ")";
}

inline void stamp(CsvTable& t, const std::string& name, const ExperimentConfig& c, const std::string& hash,
                  const Truth& truth) {
    t.meta("schema", "pade-mor/" + name + "/v" + std::to_string(schema_version));
    t.meta("config_hash", hash);
    t.meta("problem", to_string(c.problem));
    t.meta("z0", fmt(c.z0.real()) + " " + fmt(c.z0.imag()));
    t.meta("weight", weight_note(c));
    t.meta("seed", std::to_string(c.seed));
    t.meta("E", c.e_fixed ? std::to_string(*c.e_fixed) : "M+N");
    t.meta("rho", to_json(c).at("rho").dump());
    t.meta("denominator", c.method == pade::DenominatorMethod::gramian ? "gramian" : "taylor_qr");
    for (const auto& [k, v] : truth.notes) t.meta(k, v);
}

inline std::string bool_cell(bool b) { return b ? "1" : "0"; }

}  // namespace detail

// Runs every study the config asks for and writes the files into `out`.
inline RunSummary run(const ExperimentConfig& c, const std::filesystem::path& out) {
    namespace fs = std::filesystem;
    fs::create_directories(out);
    const unsigned threads = thread_count();
    const std::string hash = config_hash(c);
    const Truth truth = make_truth(c);
    const auto& map = *truth.map;
    RunSummary summary;
    auto save = [&](const CsvTable& t, const std::string& file) {
        t.write((out / file).string());
        summary.files.push_back(file);
    };

    // main approximants, one per configured (M, N)
    index_t e_max = 0;
    for (const auto& [m, n] : c.degrees) e_max = std::max(e_max, c.e_for(m, n));
    const auto table = pade::TaylorTable::from_map(map, e_max);
    std::vector<pade::PadeApproximant> approx;
    for (const auto& [m, n] : c.degrees) {
        const auto cfg = c.pade_config(m, n);
        approx.push_back(pade::build_pade(table.truncated(cfg.E), cfg));
    }

    if (c.sweep_intervals > 0) {
        const auto grid = uniform_grid(c.kmin, c.kmax, c.sweep_intervals);
        const auto rows = sweep_norm(map, approx, grid, truth.poles, threads);
        CsvTable t(sweep_columns(c.degrees));
        detail::stamp(t, "sweep", c, hash, truth);
        for (const auto& r : rows) {
            std::vector<std::string> cells = {fmt(r.z), fmt(r.truth_norm)};
            for (index_t a = 0; a < approx.size(); ++a) {
                cells.push_back(fmt(r.pade_norm[a]));
                cells.push_back(fmt(r.relerr[a]));
            }
            cells.push_back(r.status);
            t.row(std::move(cells));
        }
        save(t, "sweep.csv");
        if (c.svg) {
            std::vector<Series> s(1);
            s[0].label = "truth";
            for (const auto& r : rows) {
                s[0].x.push_back(r.z);
                s[0].y.push_back(r.truth_norm);
            }
            for (index_t a = 0; a < approx.size(); ++a) {
                Series p{degree_tag(approx[a].M(), approx[a].N()), {}, {}};
                for (const auto& r : rows) {
                    p.x.push_back(r.z);
                    p.y.push_back(r.pade_norm[a]);
                }
                s.push_back(std::move(p));
            }
            write_svg((out / "sweep.svg").string(), render_svg("weighted norm", "z", "norm", s));
            summary.files.push_back("sweep.svg");
        }
    }

    std::vector<ErrorRow> err_rows;
    if (c.error_study) {
        const auto& es = *c.error_study;
        err_rows = error_vs_M(map, es.z, es.m_min, es.m_max, es.n_values,
                              [&](index_t M, index_t N, double z) { return c.pade_config(M, N, z); }, truth.poles,
                              threads);
        CsvTable t(error_vs_m_columns);
        detail::stamp(t, "error_vs_M", c, hash, truth);
        t.meta("taylor_error", "degree-E Taylor polynomial from the same coefficients");
        t.meta("heuristic_rate", "(|z0 - z| / |z0 - lambda_{N+1}|)^(M+1), poles ordered by distance to z0");
        for (const auto& r : err_rows)
            t.row({fmt(r.z), fmt(r.M), fmt(r.N), fmt(r.E), fmt(r.rho), fmt(r.error), fmt(r.taylor_error),
                   fmt(r.heuristic), fmt(r.diagnostics.smallest_eigenvalue), fmt(r.diagnostics.relative_gap()),
                   detail::bool_cell(r.diagnostics.degenerate), r.status});
        save(t, "error_vs_M.csv");
        if (c.svg) {
            std::map<std::pair<double, index_t>, Series> groups;
            for (const auto& r : err_rows) {
                auto& s = groups[{r.z, r.N}];
                s.label = "z=" + fmt(r.z) + " N=" + std::to_string(r.N);
                s.x.push_back(static_cast<double>(r.M));
                s.y.push_back(r.error);
            }
            std::vector<Series> s;
            for (auto& [k, v] : groups) s.push_back(std::move(v));
            write_svg((out / "error_vs_M.svg").string(), render_svg("relative error", "M", "error", s));
            summary.files.push_back("error_vs_M.svg");
        }
    }

    if (c.roots && !truth.poles.empty()) {
        CsvTable t(roots_columns);
        detail::stamp(t, "roots", c, hash, truth);
        std::vector<pade::PadeApproximant> study;
        if (c.error_study) {
            const auto& es = *c.error_study;
            index_t e_top = 0;
            for (index_t n : es.n_values) e_top = std::max(e_top, c.e_for(es.m_max, n));
            const auto tab = pade::TaylorTable::from_map(map, e_top);
            for (index_t n : es.n_values)
                for (index_t m = es.m_min; m <= es.m_max; ++m) {
                    if (n == 0) continue;
                    const auto cfg = c.pade_config(m, n, es.z.front());
                    study.push_back(pade::build_pade(tab.truncated(cfg.E), cfg));
                }
        } else {
            study = approx;
        }
        for (const auto& a : study)
            for (const auto& r : root_convergence(a, truth.poles))
                t.row({fmt(r.M), fmt(r.N), fmt(r.root_index), fmt(r.root.real()), fmt(r.root.imag()),
                       fmt(static_cast<long long>(r.pole_index)), fmt(r.pole), fmt(r.distance), fmt(r.relative_gap)});
        save(t, "roots.csv");
    }

    if (c.problem == ProblemKind::stochastic) {
        const stochastic::RandomWavenumber rw{c.kmin, c.kmax, c.seed, {}};
        const auto draws = rw.draw(c.stochastic.samples);
        const auto qoi = stochastic::QuantityOfInterest::weighted_norm();
        const auto x = stochastic::evaluate_qoi(draws, map, qoi, truth.poles, threads);
        const auto ts = uniform_grid(c.stochastic.t_min, c.stochastic.t_max,
                                     c.stochastic.t_points > 1 ? c.stochastic.t_points - 1 : 0);
        std::vector<stochastic::QoiValues> xp;
        CsvTable chf(chf_columns);
        detail::stamp(chf, "chf", c, hash, truth);
        std::vector<double> max_err(approx.size(), nan_value);
        std::vector<index_t> paired(approx.size());
        for (index_t a = 0; a < approx.size(); ++a) {
            xp.push_back(stochastic::evaluate_qoi(draws, approx[a], qoi, threads));
            const auto ss = stochastic::pair_samples(draws, x, xp.back(), c.seed);
            paired[a] = ss.size();
            if (ss.size() == 0) continue;
            double mx = 0.0;
            for (double t : ts) {
                const cplx px = stochastic::characteristic_fn(ss.x, t), pp = stochastic::characteristic_fn(ss.xp, t);
                const double e = std::abs(px - pp);
                mx = std::max(mx, e);
                chf.row({fmt(approx[a].M()), fmt(approx[a].N()), fmt(t), fmt(px.real()), fmt(px.imag()), fmt(pp.real()),
                         fmt(pp.imag()), fmt(e)});
            }
            max_err[a] = mx;
        }
        index_t excluded_truth = 0;
        for (const auto& v : x) excluded_truth += v ? 0 : 1;
        chf.meta("samples", std::to_string(c.stochastic.samples));
        chf.meta("excluded_truth", std::to_string(excluded_truth));
        save(chf, "chf.csv");

        if (c.stochastic.write_samples) {
            CsvTable s(samples_columns(c.degrees));
            detail::stamp(s, "samples", c, hash, truth);
            s.meta("excluded", "empty cell = sample excluded (near a pole of that map)");
            for (index_t k = 0; k < draws.size(); ++k) {
                std::vector<std::string> cells = {fmt(draws[k]), x[k] ? fmt(*x[k]) : ""};
                for (const auto& v : xp) cells.push_back(v[k] ? fmt(*v[k]) : "");
                s.row(std::move(cells));
            }
            save(s, "samples.csv");
        }

        // one fit per denominator degree
        CsvTable rates(rates_columns);
        detail::stamp(rates, "rates", c, hash, truth);
        std::vector<double> by_distance = truth.poles;
        std::stable_sort(by_distance.begin(), by_distance.end(),
                         [&](double a, double b) { return std::abs(a - c.z0) < std::abs(b - c.z0); });
        std::map<index_t, std::vector<index_t>> groups;
        for (index_t a = 0; a < approx.size(); ++a) groups[approx[a].N()].push_back(a);
        const double floor = stochastic::noise_floor(c.stochastic.samples);
        const double rho = c.rho_for(std::nullopt);
        for (const auto& [n, members] : groups) {
            stochastic::RateFit fit;
            fit.unresolvable = true;
            fit.slope = fit.stderr_slope = fit.theoretical_slope = nan_value;
            if (by_distance.size() > n) {
                std::vector<double> ms, es;
                for (index_t a : members) {
                    ms.push_back(static_cast<double>(approx[a].M()));
                    es.push_back(max_err[a]);
                }
                fit = stochastic::fit_rate(ms, es, rho, std::abs(c.z0 - by_distance[n]), floor);
                if (fit.unresolvable) fit.slope = fit.stderr_slope = nan_value;
            }
            for (index_t a : members)
                rates.row({fmt(approx[a].M()), fmt(n), fmt(max_err[a]), fmt(fit.slope), fmt(fit.stderr_slope),
                           fmt(fit.theoretical_slope), fmt(floor), detail::bool_cell(fit.consistent),
                           detail::bool_cell(fit.unresolvable)});
        }
        save(rates, "rates.csv");
    }

    json m;
    m["tool"] = "pade-mor";
    m["version"] = PADEMOR_VERSION;
    m["schema_version"] = schema_version;
    m["config"] = to_json(c);
    m["config_hash"] = hash;
    m["seed"] = c.seed;
    m["precision"] = "IEEE binary64";
    m["compiler"] = __VERSION__;
    m["files"] = summary.files;
    json diag = json::array();
    for (const auto& a : approx)
        diag.push_back({{"M", a.M()},
                        {"N", a.N()},
                        {"smallest_eigenvalue", a.diagnostics().smallest_eigenvalue},
                        {"relative_gap", std::isfinite(a.diagnostics().relative_gap())
                                             ? json(a.diagnostics().relative_gap())
                                             : json(nullptr)},
                        {"degenerate", a.diagnostics().degenerate}});
    m["approximants"] = std::move(diag);
    {
        std::ofstream f(out / "manifest.json", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write manifest.json");
        f << m.dump(2) << '\n';
    }
    summary.manifest = std::move(m);
    return summary;
}

// Accepts a config or a manifest written by run().
inline ExperimentConfig load_config_document(const json& j) {
    if (j.is_object() && j.contains("tool") && j.contains("config")) return parse_config(j.at("config"));
    return parse_config(j);
}

}  // namespace pademor::experiment
