#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pademor/core/parallel.hpp"
#include "pademor/maps/response_map.hpp"
#include "pademor/pade/lspade.hpp"
#include "pademor/stochastic/rng.hpp"

namespace pademor::stochastic {

// k^2 on [k2_min, k2_max]. Uniform unless a quantile function is plugged in.
struct RandomWavenumber {
    double k2_min = 0.0;
    double k2_max = 1.0;
    std::uint64_t seed = 0;
    std::function<double(double)> quantile;  // maps U(0,1) to the law; must stay in the interval

    void validate() const {
        if (!(k2_min < k2_max) || !std::isfinite(k2_min) || !std::isfinite(k2_max))
            throw ArgumentError("RandomWavenumber: need k2_min < k2_max");
    }

    std::vector<double> draw(index_t count) const {
        validate();
        if (count < 1) throw ArgumentError("RandomWavenumber::draw: count must be at least 1");
        const CounterRng rng(seed);
        std::vector<double> out(count);
        for (index_t k = 0; k < count; ++k) {
            const double u = rng.uniform(k);
            double v = quantile ? quantile(u) : k2_min + (k2_max - k2_min) * u;
            out[k] = std::clamp(v, k2_min, k2_max);
        }
        return out;
    }
};

inline std::vector<double> draw_samples(const RandomWavenumber& rw, index_t count) { return rw.draw(count); }

struct QuantityOfInterest {
    std::string name;
    std::function<double(const SpaceVector&)> fn;
    double lipschitz = 1.0;

    static QuantityOfInterest weighted_norm() {
        return {"weighted_norm", [](const SpaceVector& v) { return norm(v); }, 1.0};
    }
};

// nullopt marks an excluded sample.
using QoiValues = std::vector<std::optional<double>>;

inline constexpr double true_pole_radius = 1e-8;

inline QoiValues evaluate_qoi(std::span<const double> draws, const maps::ResponseMap& map,
                              const QuantityOfInterest& qoi, std::vector<double> exclusion_poles = {},
                              unsigned threads = 1) {
    if (exclusion_poles.empty()) exclusion_poles = map.known_poles();
    std::sort(exclusion_poles.begin(), exclusion_poles.end());
    QoiValues out(draws.size());
    parallel_for(draws.size(), threads, [&](index_t k) {
        const double z = draws[k];
        auto it = std::lower_bound(exclusion_poles.begin(), exclusion_poles.end(), z);
        if (it != exclusion_poles.end() && std::abs(*it - z) <= true_pole_radius) return;
        if (it != exclusion_poles.begin() && std::abs(*(it - 1) - z) <= true_pole_radius) return;
        out[k] = qoi.fn(map.evaluate(z));
    });
    return out;
}

inline QoiValues evaluate_qoi(std::span<const double> draws, const pade::PadeApproximant& approx,
                              const QuantityOfInterest& qoi, unsigned threads = 1) {
    QoiValues out(draws.size());
    parallel_for(draws.size(), threads, [&](index_t k) {
        try {
            out[k] = qoi.fn(approx.evaluate(draws[k]));
        } catch (const PoleProximityError&) {
        }
    });
    return out;
}

struct SampleSet {
    std::vector<double> draws;
    std::vector<double> x;
    std::vector<double> xp;
    std::uint64_t seed = 0;
    index_t requested = 0;
    index_t excluded_truth = 0;
    index_t excluded_surrogate = 0;

    index_t size() const noexcept { return draws.size(); }
};

// Pairs truth and surrogate on the same draws; a sample excluded on either
// side is dropped from both.
inline SampleSet pair_samples(const std::vector<double>& draws, const QoiValues& truth, const QoiValues& surrogate,
                              std::uint64_t seed) {
    if (truth.size() != draws.size() || surrogate.size() != draws.size())
        throw ArgumentError("pair_samples: lists of different length");
    SampleSet s;
    s.seed = seed;
    s.requested = draws.size();
    for (index_t k = 0; k < draws.size(); ++k) {
        if (!truth[k]) ++s.excluded_truth;
        if (!surrogate[k]) ++s.excluded_surrogate;
        if (!truth[k] || !surrogate[k]) continue;
        s.draws.push_back(draws[k]);
        s.x.push_back(*truth[k]);
        s.xp.push_back(*surrogate[k]);
    }
    return s;
}

inline SampleSet make_sample_set(const RandomWavenumber& rw, index_t count, const maps::ResponseMap& map,
                                 const pade::PadeApproximant& approx, const QuantityOfInterest& qoi,
                                 unsigned threads = 1) {
    const auto draws = rw.draw(count);
    return pair_samples(draws, evaluate_qoi(draws, map, qoi, {}, threads), evaluate_qoi(draws, approx, qoi, threads),
                        rw.seed);
}

namespace detail {
template <class F>
double pairwise_sum(index_t first, index_t last, const F& term) {
    if (last - first <= 16) {
        double s = 0.0;
        for (index_t i = first; i < last; ++i) s += term(i);
        return s;
    }
    const index_t mid = first + (last - first) / 2;
    return pairwise_sum(first, mid, term) + pairwise_sum(mid, last, term);
}
}  // namespace detail

// (1/n) sum exp(i t x_k), pairwise summed.
inline cplx characteristic_fn(std::span<const double> values, double t) {
    if (values.empty()) throw ArgumentError("characteristic_fn: no values");
    const index_t n = values.size();
    const double re = detail::pairwise_sum(0, n, [&](index_t k) { return std::cos(t * values[k]); });
    const double im = detail::pairwise_sum(0, n, [&](index_t k) { return std::sin(t * values[k]); });
    cplx phi(re / static_cast<double>(n), im / static_cast<double>(n));
    const double mod = std::abs(phi);
    if (mod > 1.0) phi /= mod;  // rounding only
    return phi;
}

inline std::vector<double> err_curve(const SampleSet& s, std::span<const double> t_grid) {
    if (t_grid.empty()) throw ArgumentError("err_curve: empty t grid");
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(std::abs(characteristic_fn(s.x, t) - characteristic_fn(s.xp, t)));
    return out;
}

inline double noise_floor(index_t samples) { return 8.0 / std::sqrt(static_cast<double>(samples)); }

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double theoretical_slope = 0.0;  // (1/4) log(rho / R)
    index_t points = 0;
    bool unresolvable = false;
    bool consistent = false;  // slope <= theory + 2 stderr
};

// Least-squares slope of log(err) against M over errors above the noise floor.
inline RateFit fit_rate(std::span<const double> ms, std::span<const double> errs, double rho, double r,
                        double floor = 0.0) {
    if (ms.size() != errs.size()) throw ArgumentError("fit_rate: M and error lists differ in length");
    if (!(rho > 0.0) || !(r > 0.0)) throw ArgumentError("fit_rate: rho and R must be positive");
    RateFit fit;
    fit.theoretical_slope = 0.25 * std::log(rho / r);
    std::vector<double> xs, ys;
    for (index_t k = 0; k < ms.size(); ++k)
        if (errs[k] > floor && errs[k] > 0.0) {
            xs.push_back(ms[k]);
            ys.push_back(std::log(errs[k]));
        }
    fit.points = xs.size();
    if (xs.size() < 3) {
        fit.unresolvable = true;
        return fit;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (index_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (index_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (sxx == 0.0) {
        fit.unresolvable = true;
        return fit;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (index_t k = 0; k < xs.size(); ++k) {
        const double e = ys[k] - (fit.intercept + fit.slope * xs[k]);
        ssr += e * e;
    }
    fit.stderr_slope = std::sqrt(ssr / (n - 2.0) / sxx);
    fit.consistent = fit.slope <= fit.theoretical_slope + 2.0 * fit.stderr_slope;
    return fit;
}

}  // namespace pademor::stochastic
