#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pademor/linalg/hermitian.hpp"
#include "pademor/linalg/sparse_matrix.hpp"

namespace pademor::linalg {

// R factor of a tall matrix given by columns (Householder, no Q kept).
// Returns R row-major, k x k, k = number of columns.
inline std::vector<cvector> householder_r(std::vector<cvector> cols) {
    const index_t k = cols.size();
    if (k == 0) return {};
    const index_t m = cols[0].size();
    for (const auto& c : cols)
        if (c.size() != m) throw ArgumentError("householder_r: columns of different length");
    std::vector<cvector> r(k, cvector(k));
    for (index_t j = 0; j < k; ++j) {
        if (j >= m) break;
        cvector& x = cols[j];
        const double nrm = norm2(std::span<const cplx>(x).subspan(j));
        if (nrm == 0.0) {
            r[j][j] = 0.0;
            for (index_t c = j + 1; c < k; ++c) r[j][c] = cols[c][j];
            continue;
        }
        const cplx x0 = x[j];
        const cplx ph = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
        const cplx alpha = -ph * nrm;  // reflected value
        // v = x - alpha e_j, stored over x[j..]
        x[j] -= alpha;
        const double vnorm2 = std::pow(norm2(std::span<const cplx>(x).subspan(j)), 2);
        r[j][j] = alpha;
        for (index_t c = j + 1; c < k; ++c) {
            cvector& y = cols[c];
            cplx s = 0.0;
            for (index_t i = j; i < m; ++i) s += std::conj(x[i]) * y[i];
            const cplx f = 2.0 * s / vnorm2;
            for (index_t i = j; i < m; ++i) y[i] -= f * x[i];
            r[j][c] = y[j];
        }
    }
    return r;
}

struct RightSingular {
    std::vector<double> values;   // ascending
    std::vector<cvector> vectors; // matching right singular vectors
};

// One-sided cyclic Jacobi on the columns of a small square matrix.
inline RightSingular right_singular(const std::vector<cvector>& a_rows, index_t max_sweeps = 60) {
    const index_t n = a_rows.size();
    // column-major working copy
    std::vector<cvector> u(n, cvector(n));
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) u[j][i] = a_rows[i][j];
    std::vector<cvector> v(n, cvector(n));  // v[row][col]
    for (index_t i = 0; i < n; ++i) v[i][i] = 1.0;
    constexpr double rel = 1e-17;
    for (index_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (index_t p = 0; p + 1 < n; ++p)
            for (index_t q = p + 1; q < n; ++q) {
                const double app = std::pow(norm2(u[p]), 2), aqq = std::pow(norm2(u[q]), 2);
                const cplx b = dot(u[p], u[q]);
                const double ab = std::abs(b);
                if (ab == 0.0 || ab <= rel * std::sqrt(app * aqq)) continue;
                rotated = true;
                const cplx e = b / ab;
                const double theta = (aqq - app) / (2.0 * ab);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx u10 = -s * std::conj(e), u11 = c * std::conj(e);
                for (index_t i = 0; i < n; ++i) {
                    const cplx xp = u[p][i], xq = u[q][i];
                    u[p][i] = xp * c + xq * u10;
                    u[q][i] = xp * s + xq * u11;
                }
                for (index_t i = 0; i < n; ++i) {
                    const cplx vp = v[i][p], vq = v[i][q];
                    v[i][p] = vp * c + vq * u10;
                    v[i][q] = vp * s + vq * u11;
                }
            }
        if (!rotated) break;
    }
    std::vector<double> sv(n);
    for (index_t j = 0; j < n; ++j) sv[j] = norm2(u[j]);
    std::vector<index_t> order(n);
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(), [&](index_t a, index_t b) { return sv[a] < sv[b]; });
    RightSingular out;
    for (index_t k : order) {
        out.values.push_back(sv[k]);
        cvector col(n);
        for (index_t i = 0; i < n; ++i) col[i] = v[i][k];
        normalize_phase(col);
        out.vectors.push_back(std::move(col));
    }
    return out;
}

}  // namespace pademor::linalg
