#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pademor/core/errors.hpp"
#include "pademor/linalg/sparse_matrix.hpp"

namespace pademor::linalg {

struct IterativeResult {
    cvector x;
    double residual = 0.0;  // relative to ||b||
    index_t iterations = 0;
    bool converged = false;
};

// BiCGSTAB with Jacobi (diagonal) preconditioning on the right. On breakdown
// the shadow residual is reset to the current residual and iteration goes on.
inline IterativeResult bicgstab(const SparseMatrix& a, std::span<const cplx> b, double tol, index_t max_iter,
                                std::span<const cplx> x0 = {}) {
    const index_t n = a.rows();
    if (!a.square() || b.size() != n) throw ArgumentError("bicgstab: size mismatch");
    cvector dinv(n, 1.0);
    for (index_t i = 0; i < n; ++i) {
        const cplx d = a.at(i, i);
        if (d != cplx{}) dinv[i] = 1.0 / d;
    }
    IterativeResult out;
    out.x = x0.empty() ? cvector(n) : cvector(x0.begin(), x0.end());
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        out.x.assign(n, cplx{});
        out.converged = true;
        return out;
    }
    cvector r(n), rhat(n), p(n), v(n), s(n), t(n), ph(n), sh(n);
    auto residual = [&] {
        a.multiply(out.x, r);
        for (index_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        return norm2(r) / bnorm;
    };
    double rel = residual();
    rhat = r;
    cplx rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(p.begin(), p.end(), cplx{});
    std::fill(v.begin(), v.end(), cplx{});
    for (index_t it = 0; it < max_iter && rel > tol; ++it) {
        out.iterations = it + 1;
        const cplx rho_new = dot(rhat, r);
        if (std::abs(rho_new) < 1e-300 || std::abs(omega) < 1e-300) {
            rhat = r;
            rho = 1.0, alpha = 1.0, omega = 1.0;
            std::fill(p.begin(), p.end(), cplx{});
            std::fill(v.begin(), v.end(), cplx{});
            continue;
        }
        const cplx beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (index_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        for (index_t i = 0; i < n; ++i) ph[i] = dinv[i] * p[i];
        a.multiply(ph, v);
        const cplx rv = dot(rhat, v);
        if (rv == cplx{}) {
            rhat = r;
            continue;
        }
        alpha = rho / rv;
        for (index_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / bnorm <= tol) {
            for (index_t i = 0; i < n; ++i) out.x[i] += alpha * ph[i];
            rel = residual();
            break;
        }
        for (index_t i = 0; i < n; ++i) sh[i] = dinv[i] * s[i];
        a.multiply(sh, t);
        const double tt = std::real(dot(t, t));
        omega = tt > 0.0 ? dot(t, s) / tt : cplx{};
        for (index_t i = 0; i < n; ++i) out.x[i] += alpha * ph[i] + omega * sh[i];
        for (index_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        rel = norm2(r) / bnorm;
        if (rel <= tol) rel = residual();  // guard against drift of the recursive residual
    }
    out.residual = rel;
    out.converged = rel <= tol;
    return out;
}

}  // namespace pademor::linalg
