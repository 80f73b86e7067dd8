#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pademor/core/parallel.hpp"
#include "pademor/maps/response_map.hpp"
#include "pademor/pade/lspade.hpp"

namespace pademor::experiment {

inline constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

// PADE_MOR_THREADS, else the hardware count.
inline unsigned thread_count() {
    if (const char* env = std::getenv("PADE_MOR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline std::vector<double> uniform_grid(double a, double b, index_t intervals) {
    if (intervals == 0) return {a};
    std::vector<double> g(intervals + 1);
    for (index_t k = 0; k <= intervals; ++k)
        g[k] = k == intervals ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(intervals);
    return g;
}

// Nudges z off a known pole by 1e-10.
inline double avoid_poles(double z, const std::vector<double>& poles) {
    for (double p : poles)
        if (std::abs(z - p) < 1e-10) return p + 1e-10;
    return z;
}

inline std::string degree_tag(index_t M, index_t N) { return "M" + std::to_string(M) + "_N" + std::to_string(N); }

struct SweepRow {
    double z = 0.0;
    double truth_norm = nan_value;
    std::vector<double> pade_norm;
    std::vector<double> relerr;
    std::string status = "ok";
};

inline void add_flag(std::string& status, const std::string& f) { status = status == "ok" ? f : status + ";" + f; }

// ||S(z)||, ||S_P(z)|| and the relative error per approximant. Failures are
// flagged in the status column and leave NaN cells.
inline std::vector<SweepRow> sweep_norm(const maps::ResponseMap& map, const std::vector<pade::PadeApproximant>& approx,
                                        const std::vector<double>& grid, const std::vector<double>& poles = {},
                                        unsigned threads = 1) {
    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), threads, [&](index_t k) {
        SweepRow& r = rows[k];
        r.z = avoid_poles(grid[k], poles);
        if (r.z != grid[k]) add_flag(r.status, "shifted_off_pole");
        r.pade_norm.assign(approx.size(), nan_value);
        r.relerr.assign(approx.size(), nan_value);
        std::optional<SpaceVector> truth;
        try {
            truth = map.evaluate(r.z);
            r.truth_norm = norm(*truth);
        } catch (const SolverError&) {
            add_flag(r.status, "truth_solver_failure");
        }
        for (index_t a = 0; a < approx.size(); ++a) {
            try {
                const auto s = approx[a].evaluate(r.z);
                r.pade_norm[a] = norm(s);
                if (truth) r.relerr[a] = norm(*truth - s) / r.truth_norm;
            } catch (const PoleProximityError&) {
                add_flag(r.status, "surrogate_pole_" + degree_tag(approx[a].M(), approx[a].N()));
            }
        }
    });
    return rows;
}

struct ErrorRow {
    double z = 0.0;
    index_t M = 0, N = 0, E = 0;
    double rho = 0.0;
    double error = nan_value;
    double taylor_error = nan_value;
    double heuristic = nan_value;
    pade::PadeDiagnostics diagnostics;
    std::string status = "ok";
};

using ConfigMaker = std::function<pade::PadeConfig(index_t M, index_t N, double z)>;

// Relative error at each z for M in [m_min, m_max] and each N, next to the
// degree-E Taylor polynomial built from the same coefficients.
inline std::vector<ErrorRow> error_vs_M(const maps::ResponseMap& map, const std::vector<double>& zs, index_t m_min,
                                        index_t m_max, const std::vector<index_t>& ns, const ConfigMaker& make,
                                        const std::vector<double>& poles = {}, unsigned threads = 1) {
    struct Job {
        double z;
        index_t M, N;
    };
    std::vector<Job> jobs;
    index_t e_max = 0;
    for (double z : zs)
        for (index_t N : ns)
            for (index_t M = m_min; M <= m_max; ++M) {
                jobs.push_back({z, M, N});
                e_max = std::max(e_max, make(M, N, z).E);
            }
    const auto table = pade::TaylorTable::from_map(map, e_max);  // sequential cache fill
    std::vector<std::optional<SpaceVector>> truth(zs.size());
    std::vector<double> truth_norm(zs.size(), nan_value);
    for (index_t k = 0; k < zs.size(); ++k) {
        try {
            truth[k] = map.evaluate(zs[k]);
            truth_norm[k] = norm(*truth[k]);
        } catch (const SolverError&) {
        }
    }
    std::vector<ErrorRow> rows(jobs.size());
    parallel_for(jobs.size(), threads, [&](index_t j) {
        const auto& job = jobs[j];
        const index_t zi = static_cast<index_t>(std::find(zs.begin(), zs.end(), job.z) - zs.begin());
        ErrorRow& r = rows[j];
        r.z = job.z;
        r.M = job.M;
        r.N = job.N;
        const auto cfg = make(job.M, job.N, job.z);
        r.E = cfg.E;
        r.rho = cfg.rho;
        if (!truth[zi]) add_flag(r.status, "truth_solver_failure");
        const auto sub = table.truncated(cfg.E);
        try {
            const auto a = pade::build_pade(sub, cfg);
            r.diagnostics = a.diagnostics();
            if (truth[zi]) r.error = norm(*truth[zi] - a.evaluate(job.z)) / truth_norm[zi];
        } catch (const PoleProximityError&) {
            add_flag(r.status, "surrogate_pole");
        }
        auto tc = cfg;
        tc.M = cfg.E;
        tc.N = 0;
        const auto taylor = pade::build_pade(sub, tc);
        if (truth[zi]) r.taylor_error = norm(*truth[zi] - taylor.evaluate(job.z)) / truth_norm[zi];
        if (poles.size() >= job.N + 1) r.heuristic = pade::heuristic_rate(job.z, cfg.z0, poles, job.M, job.N);
    });
    return rows;
}

// Greedy nearest matching: repeatedly take the closest unused (root, pole)
// pair. Entry k is the pole index of root k, or -1.
inline std::vector<long> match_roots(const cvector& roots, const std::vector<double>& poles) {
    struct Pair {
        double d;
        index_t r, p;
    };
    std::vector<Pair> pairs;
    for (index_t r = 0; r < roots.size(); ++r)
        for (index_t p = 0; p < poles.size(); ++p) pairs.push_back({std::abs(roots[r] - poles[p]), r, p});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
    std::vector<long> match(roots.size(), -1);
    std::vector<bool> used(poles.size(), false);
    for (const auto& pr : pairs)
        if (match[pr.r] < 0 && !used[pr.p]) {
            match[pr.r] = static_cast<long>(pr.p);
            used[pr.p] = true;
        }
    return match;
}

struct RootRow {
    index_t M = 0, N = 0, root_index = 0;
    cplx root{};
    long pole_index = -1;
    double pole = nan_value;
    double distance = nan_value;
    double relative_gap = nan_value;
};

inline std::vector<RootRow> root_convergence(const pade::PadeApproximant& a, const std::vector<double>& poles) {
    std::vector<RootRow> out;
    cvector roots;
    try {
        roots = a.poles();
    } catch (const DegeneratePolynomialError&) {
        return out;
    }
    const auto match = match_roots(roots, poles);
    for (index_t k = 0; k < roots.size(); ++k) {
        RootRow r;
        r.M = a.M();
        r.N = a.N();
        r.root_index = k;
        r.root = roots[k];
        r.pole_index = match[k];
        if (match[k] >= 0) {
            r.pole = poles[static_cast<index_t>(match[k])];
            r.distance = std::abs(roots[k] - r.pole);
        }
        r.relative_gap = a.diagnostics().relative_gap();
        out.push_back(r);
    }
    return out;
}

}  // namespace pademor::experiment
