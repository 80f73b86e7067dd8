#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pademor/core/errors.hpp"
#include "pademor/core/types.hpp"

namespace pademor::linalg {

// q(z) = sum_a coeffs[a] (z - center)^a. The leading coefficient may vanish.
struct ShiftedPolynomial {
    cplx center{};
    cvector coeffs;

    index_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    cplx operator()(cplx z) const noexcept {
        const cplx w = z - center;
        cplx acc = 0.0;
        for (index_t k = coeffs.size(); k-- > 0;) acc = acc * w + coeffs[k];
        return acc;
    }

    double max_abs_coeff() const noexcept {
        double m = 0.0;
        for (const auto& c : coeffs) m = std::max(m, std::abs(c));
        return m;
    }
};

// Expand lead * prod (z - r_i) about center.
inline ShiftedPolynomial from_roots(const cvector& roots, cplx center, cplx lead = 1.0) {
    cvector c{lead};
    for (const auto& r : roots) {
        const cplx w = r - center;
        cvector next(c.size() + 1);
        for (index_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= w * c[k];
        }
        c = std::move(next);
    }
    return {center, std::move(c)};
}

struct RootOptions {
    double trim = 1e-14;
    double tol = 1e-12;
    index_t max_iter = 200;
};

// Aberth-Ehrlich on w = z - center; roots returned in z, nearest to center first.
inline cvector poly_roots(const ShiftedPolynomial& q, const RootOptions& opt = {}) {
    const double mx = q.max_abs_coeff();
    if (mx == 0.0) throw DegeneratePolynomialError("poly_roots: zero polynomial");
    index_t deg = q.coeffs.size() - 1;
    while (deg > 0 && std::abs(q.coeffs[deg]) < opt.trim * mx) --deg;
    if (deg == 0) throw DegeneratePolynomialError("poly_roots: effective degree 0");

    // roots at w = 0 are split off exactly
    index_t zeros = 0;
    while (zeros < deg && q.coeffs[zeros] == cplx{}) ++zeros;
    cvector a(q.coeffs.begin() + static_cast<std::ptrdiff_t>(zeros),
              q.coeffs.begin() + static_cast<std::ptrdiff_t>(deg) + 1);
    const index_t n = a.size() - 1;
    cvector w(n);
    if (n > 0) {
        const double radius = std::max(1.0, std::pow(std::abs(a[0]) / std::abs(a[n]), 1.0 / static_cast<double>(n)));
        for (index_t k = 0; k < n; ++k) {
            const double ang = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
            w[k] = std::polar(radius, ang);
        }
        auto eval = [&](cplx x, cplx& p, cplx& dp) {
            p = a[n];
            dp = 0.0;
            for (index_t k = n; k-- > 0;) {
                dp = dp * x + p;
                p = p * x + a[k];
            }
        };
        for (index_t it = 0; it < opt.max_iter; ++it) {
            double worst = 0.0;
            for (index_t i = 0; i < n; ++i) {
                cplx p, dp;
                eval(w[i], p, dp);
                if (p == cplx{}) continue;
                const cplx ratio = p / dp;
                cplx sum = 0.0;
                for (index_t j = 0; j < n; ++j)
                    if (j != i) sum += 1.0 / (w[i] - w[j]);
                const cplx step = ratio / (1.0 - ratio * sum);
                if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
                w[i] -= step;
                worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(w[i])));
            }
            if (worst <= opt.tol) break;
        }
        // one Newton polish per root
        for (auto& x : w) {
            cplx p, dp;
            eval(x, p, dp);
            if (dp != cplx{}) {
                const cplx step = p / dp;
                if (std::isfinite(step.real()) && std::isfinite(step.imag()) && std::abs(step) < 1e-6 * std::max(1.0, std::abs(x)))
                    x -= step;
            }
        }
    }
    w.insert(w.end(), zeros, cplx{});
    std::stable_sort(w.begin(), w.end(), [](cplx l, cplx r) { return std::abs(l) < std::abs(r); });
    for (auto& x : w) x += q.center;
    return w;
}

}  // namespace pademor::linalg
