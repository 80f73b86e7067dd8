#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pademor/linalg/hermitian.hpp"
#include "pademor/linalg/shifted_solve.hpp"

namespace pademor::linalg {

// Eigenvalues of K x = lambda M x nearest to a real shift, by shift-invert
// block iteration with Rayleigh-Ritz. Only meant for a handful of values.
inline std::vector<double> nearest_generalized_eigenvalues(const SparseMatrix& k, const SparseMatrix& m, double shift,
                                                           index_t count, double tol = 1e-12,
                                                           index_t max_iter = 500) {
    const index_t n = k.rows();
    if (count == 0 || count > n) throw ArgumentError("nearest_generalized_eigenvalues: bad count");
    const index_t p = std::min(n, count + 6);
    ShiftedSolver solver(k, m, shift, 1e-9);

    std::vector<cvector> x(p, cvector(n));
    for (index_t j = 0; j < p; ++j)
        for (index_t i = 0; i < n; ++i)
            x[j][i] = std::sin(0.7 * static_cast<double>((i + 1) * (j + 1)) + 0.3 * static_cast<double>(j));

    std::vector<double> ritz(p, 0.0), previous(p, 1e300);
    for (index_t it = 0; it < max_iter; ++it) {
        std::vector<cvector> y(p);
        for (index_t j = 0; j < p; ++j) y[j] = solver.solve(m * x[j]);
        std::vector<cvector> ky(p), my(p);
        for (index_t j = 0; j < p; ++j) {
            ky[j] = k * y[j];
            my[j] = m * y[j];
        }
        DenseHermitian kp(p), mp(p);
        for (index_t i = 0; i < p; ++i)
            for (index_t j = 0; j < p; ++j) {
                kp(i, j) = dot(y[i], ky[j]);
                mp(i, j) = dot(y[i], my[j]);
            }
        kp.symmetrize();
        mp.symmetrize();
        // Cholesky mp = L L^H
        std::vector<cvector> l(p, cvector(p));
        for (index_t j = 0; j < p; ++j) {
            double d = mp(j, j).real();
            for (index_t s = 0; s < j; ++s) d -= std::norm(l[j][s]);
            if (!(d > 0.0)) throw SolverError("nearest_generalized_eigenvalues: Ritz basis collapsed", d);
            l[j][j] = std::sqrt(d);
            for (index_t i = j + 1; i < p; ++i) {
                cplx s = mp(i, j);
                for (index_t t = 0; t < j; ++t) s -= l[i][t] * std::conj(l[j][t]);
                l[i][j] = s / l[j][j];
            }
        }
        // C = L^{-1} kp L^{-H}
        auto lower_solve = [&](cvector b) {
            for (index_t i = 0; i < p; ++i) {
                for (index_t t = 0; t < i; ++t) b[i] -= l[i][t] * b[t];
                b[i] /= l[i][i];
            }
            return b;
        };
        std::vector<cvector> w(p);  // columns of L^{-1} kp
        for (index_t j = 0; j < p; ++j) {
            cvector col(p);
            for (index_t i = 0; i < p; ++i) col[i] = kp(i, j);
            w[j] = lower_solve(col);
        }
        DenseHermitian c(p);
        for (index_t i = 0; i < p; ++i) {
            cvector row(p);  // row i of (L^{-1} kp), conjugated, solved again
            for (index_t j = 0; j < p; ++j) row[j] = std::conj(w[j][i]);
            row = lower_solve(row);
            for (index_t j = 0; j < p; ++j) c(i, j) = std::conj(row[j]);
        }
        c.symmetrize();
        auto eig = hermitian_eigen(c);
        // back-transform: z = L^{-H} v
        for (index_t j = 0; j < p; ++j) {
            cvector z = eig.vectors[j];
            for (index_t i = p; i-- > 0;) {
                for (index_t t = i + 1; t < p; ++t) z[i] -= std::conj(l[t][i]) * z[t];
                z[i] /= l[i][i];
            }
            cvector col(n);
            for (index_t s = 0; s < p; ++s)
                for (index_t i = 0; i < n; ++i) col[i] += y[s][i] * z[s];
            const double nrm = norm2(col);
            for (auto& v : col) v /= nrm;
            x[j] = std::move(col);
            ritz[j] = eig.values[j];
        }
        std::vector<index_t> order(p);
        for (index_t j = 0; j < p; ++j) order[j] = j;
        std::sort(order.begin(), order.end(),
                  [&](index_t a, index_t b) { return std::abs(ritz[a] - shift) < std::abs(ritz[b] - shift); });
        double change = 0.0;
        std::vector<double> sorted(p);
        for (index_t j = 0; j < p; ++j) sorted[j] = ritz[order[j]];
        for (index_t j = 0; j < count; ++j)
            change = std::max(change, std::abs(sorted[j] - previous[j]) / std::max(1.0, std::abs(sorted[j])));
        previous = sorted;
        if (change <= tol) break;
    }
    previous.resize(count);
    return previous;
}

}  // namespace pademor::linalg
