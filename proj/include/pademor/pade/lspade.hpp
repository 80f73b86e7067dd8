#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pademor/linalg/hermitian.hpp"
#include "pademor/linalg/polynomial.hpp"
#include "pademor/linalg/svd.hpp"
#include "pademor/maps/response_map.hpp"

namespace pademor::pade {

using linalg::DenseHermitian;
using linalg::ShiftedPolynomial;

// How the denominator is obtained. Both give the smallest eigenvector of the
// Gramian G = B^H B. taylor_qr works on B itself (QR, then one-sided Jacobi),
// so it keeps relative accuracy eps where forming G gives eps * cond(B).
enum class DenominatorMethod { taylor_qr, gramian };

struct PadeConfig {
    index_t M = 0;
    index_t N = 0;
    index_t E = 0;
    double rho = 1.0;
    cplx z0{};
    DenominatorMethod method = DenominatorMethod::taylor_qr;

    void validate() const {
        if (E < M + N) throw ArgumentError("PadeConfig: E must be at least M + N");
        if (!(rho > 0.0) || !std::isfinite(rho)) throw ArgumentError("PadeConfig: rho must be positive");
        if (!(z0.real() > 0.0)) throw ArgumentError("PadeConfig: z0 must have positive real part");
    }

    // smallest rho whose disk around z0 covers [kmin, kmax]
    static double default_rho(double kmin, double kmax, cplx z0) {
        return std::max(std::abs(kmin - z0), std::abs(kmax - z0));
    }

    static PadeConfig with_defaults(index_t M, index_t N, cplx z0, double kmin, double kmax) {
        PadeConfig c;
        c.M = M;
        c.N = N;
        c.E = M + N;
        c.rho = default_rho(kmin, kmax, z0);
        c.z0 = z0;
        return c;
    }
};

class TaylorTable {
public:
    TaylorTable(std::vector<SpaceVector> coeffs, cplx z0) : coeffs_(std::move(coeffs)), z0_(z0) {
        if (coeffs_.empty()) throw ArgumentError("TaylorTable: no coefficients");
        for (const auto& c : coeffs_)
            if (c.space() != coeffs_.front().space()) throw ArgumentError("TaylorTable: mixed spaces");
    }

    static TaylorTable from_map(const maps::ResponseMap& map, index_t E) {
        return TaylorTable(map.taylor_range(E), map.center());
    }

    index_t order() const noexcept { return coeffs_.size() - 1; }  // E
    cplx z0() const noexcept { return z0_; }
    const SpacePtr& space() const noexcept { return coeffs_.front().space(); }
    const SpaceVector& operator[](index_t beta) const { return coeffs_.at(beta); }
    const std::vector<SpaceVector>& coefficients() const noexcept { return coeffs_; }

    TaylorTable scaled(cplx c) const {
        auto copy = coeffs_;
        for (auto& v : copy) v *= c;
        return {std::move(copy), z0_};
    }

    TaylorTable truncated(index_t E) const {
        if (E > order()) throw ArgumentError("TaylorTable::truncated: not enough coefficients");
        return {std::vector<SpaceVector>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(E) + 1), z0_};
    }

private:
    std::vector<SpaceVector> coeffs_;
    cplx z0_;
};

namespace detail {
inline void check(const TaylorTable& t, const PadeConfig& cfg) {
    cfg.validate();
    if (cfg.E > t.order())
        throw ArgumentError("Taylor table holds order " + std::to_string(t.order()) + " but E = " +
                            std::to_string(cfg.E));
    if (std::abs(cfg.z0 - t.z0()) > 1e-14 * std::abs(t.z0()))
        throw ArgumentError("PadeConfig z0 differs from the Taylor table center");
}
}  // namespace detail

// G_ij = sum_{a=M+1..E} <S_{a-j}, S_{a-i}> rho^{2a}, S_g = 0 for g < 0.
inline DenseHermitian build_gramian(const TaylorTable& t, const PadeConfig& cfg) {
    detail::check(t, cfg);
    if (cfg.E < cfg.M + 1) throw ArgumentError("build_gramian: empty sum (E < M + 1)");
    const index_t n = cfg.N + 1;
    // inner products are needed for coefficient indices in [M+1-N, E]
    const index_t lo = cfg.M + 1 >= cfg.N ? cfg.M + 1 - cfg.N : 0;
    const index_t span = cfg.E - lo + 1;
    std::vector<cplx> ip(span * span);
    auto pair = [&](index_t a, index_t b) -> cplx& { return ip[(a - lo) * span + (b - lo)]; };
    for (index_t a = lo; a <= cfg.E; ++a)
        for (index_t b = a; b <= cfg.E; ++b) {
            pair(a, b) = inner(t[a], t[b]);  // <S_a, S_b>
            pair(b, a) = std::conj(pair(a, b));
        }
    DenseHermitian g(n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (index_t a = cfg.M + 1; a <= cfg.E; ++a) {
                if (a < i || a < j) continue;
                s += pair(a - j, a - i) * std::pow(cfg.rho, 2.0 * static_cast<double>(a));
            }
            g(i, j) = s;
        }
    g.symmetrize();
    return g;
}

struct PadeDiagnostics {
    double smallest_eigenvalue = 0.0;
    double spectral_gap = std::numeric_limits<double>::infinity();
    double gramian_norm = 0.0;  // Frobenius
    bool degenerate = false;
    std::vector<double> spectrum;

    double relative_gap() const {
        return gramian_norm > 0.0 ? spectral_gap / gramian_norm : std::numeric_limits<double>::infinity();
    }
};

struct Denominator {
    ShiftedPolynomial q;
    PadeDiagnostics diagnostics;
};

inline Denominator compute_denominator(const DenseHermitian& g, cplx z0) {
    if (g.size() == 0) throw ArgumentError("compute_denominator: empty Gramian");
    const auto eig = linalg::hermitian_eigen(g);
    Denominator d;
    d.q = {z0, eig.vectors.front()};
    auto& diag = d.diagnostics;
    diag.smallest_eigenvalue = eig.values.front();
    diag.spectrum = eig.values;
    diag.gramian_norm = g.frobenius();
    if (eig.values.size() > 1) diag.spectral_gap = eig.values[1] - eig.values[0];
    diag.degenerate = diag.spectral_gap < 1e-12 * diag.gramian_norm;
    return d;
}

// Same minimizer without forming G: B has block rows a = M+1..E and columns
// j = 0..N holding rho^a L^H S_{a-j}, where K + w^2 M = L L^H.
inline Denominator compute_denominator_qr(const TaylorTable& t, const PadeConfig& cfg) {
    detail::check(t, cfg);
    if (cfg.E < cfg.M + 1) throw ArgumentError("compute_denominator_qr: empty sum (E < M + 1)");
    const auto& space = *t.space();
    const index_t n = space.size(), blocks = cfg.E - cfg.M;
    const index_t lo = cfg.M + 1 >= cfg.N ? cfg.M + 1 - cfg.N : 0;
    std::vector<cvector> y(cfg.E + 1);
    for (index_t b = lo; b <= cfg.E; ++b) y[b] = space.to_euclidean(t[b].values());
    std::vector<cvector> cols(cfg.N + 1, cvector(n * blocks));
    for (index_t j = 0; j <= cfg.N; ++j)
        for (index_t a = cfg.M + 1; a <= cfg.E; ++a) {
            if (a < j) continue;
            const double scale = std::pow(cfg.rho, static_cast<double>(a));
            const cvector& src = y[a - j];
            cplx* dst = cols[j].data() + (a - cfg.M - 1) * n;
            for (index_t i = 0; i < n; ++i) dst[i] = scale * src[i];
        }
    const auto svd = linalg::right_singular(linalg::householder_r(std::move(cols)));
    Denominator d;
    d.q = {cfg.z0, svd.vectors.front()};
    auto& diag = d.diagnostics;
    double fro2 = 0.0;
    for (double s : svd.values) {
        diag.spectrum.push_back(s * s);
        fro2 += s * s * s * s;
    }
    diag.smallest_eigenvalue = diag.spectrum.front();
    diag.gramian_norm = std::sqrt(fro2);
    if (diag.spectrum.size() > 1) diag.spectral_gap = diag.spectrum[1] - diag.spectrum[0];
    diag.degenerate = diag.spectral_gap < 1e-12 * diag.gramian_norm;
    return d;
}

// p_a = sum_{n <= min(a, N)} q_n S_{a-n}, a = 0..M
inline std::vector<SpaceVector> compute_numerator(const TaylorTable& t, const ShiftedPolynomial& q,
                                                  const PadeConfig& cfg) {
    if (q.coeffs.size() != cfg.N + 1) throw ArgumentError("compute_numerator: q must have N + 1 coefficients");
    if (cfg.M > t.order()) throw ArgumentError("compute_numerator: Taylor table too short");
    std::vector<SpaceVector> p;
    p.reserve(cfg.M + 1);
    for (index_t a = 0; a <= cfg.M; ++a) {
        SpaceVector acc(t.space());
        for (index_t n = 0; n <= std::min(a, cfg.N); ++n) acc.axpy(q.coeffs[n], t[a - n]);
        p.push_back(std::move(acc));
    }
    return p;
}

// (sum_{a=M+1..E} ||sum_n q_n S_{a-n}||^2 rho^{2a})^{1/2}, no Gramian involved.
inline double jbar(const TaylorTable& t, const ShiftedPolynomial& q, const PadeConfig& cfg) {
    detail::check(t, cfg);
    if (q.coeffs.size() != cfg.N + 1) throw ArgumentError("jbar: q must have N + 1 coefficients");
    double s = 0.0;
    for (index_t a = cfg.M + 1; a <= cfg.E; ++a) {
        SpaceVector acc(t.space());
        for (index_t n = 0; n <= std::min(a, cfg.N); ++n) acc.axpy(q.coeffs[n], t[a - n]);
        const double nr = norm(acc);
        s += nr * nr * std::pow(cfg.rho, 2.0 * static_cast<double>(a));
    }
    return std::sqrt(s);
}

class PadeApproximant {
public:
    PadeApproximant(std::vector<SpaceVector> numerator, ShiftedPolynomial denominator, PadeDiagnostics diagnostics = {})
        : p_(std::move(numerator)), q_(std::move(denominator)), diag_(std::move(diagnostics)) {
        if (p_.empty()) throw ArgumentError("PadeApproximant: empty numerator");
        if (q_.coeffs.empty()) throw ArgumentError("PadeApproximant: empty denominator");
        for (const auto& v : p_)
            if (v.space() != p_.front().space()) throw ArgumentError("PadeApproximant: mixed spaces");
    }

    cplx z0() const noexcept { return q_.center; }
    index_t M() const noexcept { return p_.size() - 1; }
    index_t N() const noexcept { return q_.coeffs.size() - 1; }
    const SpacePtr& space() const noexcept { return p_.front().space(); }
    const std::vector<SpaceVector>& numerator() const noexcept { return p_; }
    const ShiftedPolynomial& denominator() const noexcept { return q_; }
    const PadeDiagnostics& diagnostics() const noexcept { return diag_; }

    cplx denominator_at(cplx z) const { return q_(z); }

    // Horner in (z - z0) for both parts.
    SpaceVector evaluate(cplx z) const {
        const cplx qz = q_(z);
        if (!(std::abs(qz) > 1e-13 * q_.max_abs_coeff())) {
            std::ostringstream msg;
            msg << "PadeApproximant: |Q(" << z << ")| = " << std::abs(qz) << " is at a surrogate pole";
            throw PoleProximityError(msg.str(), std::abs(qz));
        }
        const cplx w = z - z0();
        cvector acc = p_.back().values();
        for (index_t a = p_.size() - 1; a-- > 0;) {
            const cvector& pa = p_[a].values();
            for (index_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] * w + pa[i];
        }
        for (auto& v : acc) v /= qz;
        return SpaceVector(space(), std::move(acc));
    }

    // All N roots, nearest to z0 first.
    cvector poles() const { return linalg::poly_roots(q_); }

    // Roots with |Im| <= 1 lying within the interval widened to twice its length.
    cvector filtered_poles(double kmin, double kmax) const {
        const double mid = 0.5 * (kmin + kmax), half = kmax - kmin;
        cvector out;
        for (const auto& r : poles())
            if (std::abs(r.imag()) <= 1.0 && std::abs(r.real() - mid) <= half) out.push_back(r);
        return out;
    }

private:
    std::vector<SpaceVector> p_;
    ShiftedPolynomial q_;
    PadeDiagnostics diag_;
};

// Denominator from the Gramian, numerator by convolution. For N = 0 with
// E = M the functional is empty; q = (1) is the only unit choice up to phase.
inline PadeApproximant build_pade(const TaylorTable& t, const PadeConfig& cfg) {
    detail::check(t, cfg);
    Denominator den;
    if (cfg.N == 0 && cfg.E == cfg.M) {
        den.q = {cfg.z0, cvector{1.0}};
        den.diagnostics.spectrum = {0.0};
    } else if (cfg.method == DenominatorMethod::taylor_qr) {
        den = compute_denominator_qr(t, cfg);
    } else {
        den = compute_denominator(build_gramian(t, cfg), cfg.z0);
    }
    auto p = compute_numerator(t, den.q, cfg);
    return {std::move(p), std::move(den.q), std::move(den.diagnostics)};
}

inline PadeApproximant build_pade(const maps::ResponseMap& map, const PadeConfig& cfg) {
    return build_pade(TaylorTable::from_map(map, cfg.E), cfg);
}

// (|z0 - z| / |z0 - lambda_{N+1}|)^{M+1}, poles ordered by distance to z0.
inline double heuristic_rate(cplx z, cplx z0, std::vector<cplx> poles, index_t M, index_t N) {
    if (poles.size() < N + 1)
        throw ArgumentError("heuristic_rate: need at least N + 1 = " + std::to_string(N + 1) + " poles");
    std::stable_sort(poles.begin(), poles.end(),
                     [&](cplx a, cplx b) { return std::abs(a - z0) < std::abs(b - z0); });
    return std::pow(std::abs(z0 - z) / std::abs(z0 - poles[N]), static_cast<double>(M + 1));
}

inline double heuristic_rate(cplx z, cplx z0, const std::vector<double>& poles, index_t M, index_t N) {
    return heuristic_rate(z, z0, std::vector<cplx>(poles.begin(), poles.end()), M, N);
}

}  // namespace pademor::pade
