#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "pademor/fd/grid.hpp"
#include "pademor/linalg/shifted_solve.hpp"
#include "pademor/linalg/subspace_eigen.hpp"
#include "pademor/maps/response_map.hpp"

namespace pademor::maps {

using fd::Grid;
using GridPtr = std::shared_ptr<const Grid>;

// (4/h^2)(sin^2(mh/2) + sin^2(nh/2)): 5-point Dirichlet eigenvalue on (0,pi)^2.
inline double fd_eigenvalue(int m, int n, double h) {
    if (m < 1 || n < 1 || !(h > 0.0)) throw ArgumentError("fd_eigenvalue: need m, n >= 1 and h > 0");
    const double a = std::sin(0.5 * m * h), b = std::sin(0.5 * n * h);
    return 4.0 / (h * h) * (a * a + b * b);
}

// sin(mx) sin(ny) on a (0,pi)^2 grid, unit length in the lumped mass.
inline cvector fd_eigenvector(const Grid& g, int m, int n) {
    cvector v = g.interpolate([&](Point p) { return cplx(std::sin(m * p.x) * std::sin(n * p.y)); });
    const auto w = g.mass_weights();
    double s = 0.0;
    for (index_t k = 0; k < v.size(); ++k) s += w[k] * std::norm(v[k]);
    for (auto& x : v) x /= std::sqrt(s);
    return v;
}

// Scatter free-node values into a full nodal vector.
inline cvector expand_free(const Grid& g, const cvector& free_values) {
    cvector full(g.size());
    const auto& fr = g.free_nodes();
    for (index_t k = 0; k < fr.size(); ++k) full[fr[k]] = free_values[k];
    return full;
}

inline cvector restrict_free(const Grid& g, const cvector& full) {
    const auto& fr = g.free_nodes();
    cvector out(fr.size());
    for (index_t k = 0; k < fr.size(); ++k) out[k] = full[fr[k]];
    return out;
}

// Discrete harmonic extension of Dirichlet data: K_ff w_f = -K_fD g_D.
inline cvector harmonic_lifting(const Grid& g, const std::function<cplx(Point)>& data) {
    const auto k = g.stiffness();
    cvector w(g.size());
    for (index_t d : g.dirichlet_nodes()) w[d] = data(g.point(d));
    const cvector kw = k * w;
    cvector rhs = restrict_free(g, kw);
    for (auto& r : rhs) r = -r;
    const auto kff = k.submatrix(g.free_nodes(), g.free_nodes());
    const auto zero = SparseMatrix::from_triplets(kff.rows(), kff.cols(), {});
    const cvector wf = linalg::solve_shifted(kff, zero, 0.0, rhs, 1e-12);
    const auto& fr = g.free_nodes();
    for (index_t i = 0; i < fr.size(); ++i) w[fr[i]] = wf[i];
    return w;
}

struct HelmholtzProblem {
    GridPtr grid;
    std::vector<double> eps2;  // per node; empty means 1
    cvector load;              // nodal f; empty means 0
    cvector lifting;           // full nodal w_g; empty means none
    double weight = 1.0;
};

// -Lap u - z eps2 u = f with Dirichlet/Neumann sides. Dirichlet data enter
// through a lifting w_g; S(z) = u_hom(z) + w_g.
class FdHelmholtzMap : public ResponseMap {
public:
    FdHelmholtzMap(HelmholtzProblem p, cplx center, double eval_tol = 1e-10)
        : ResponseMap(make_space(p), center), problem_(std::move(p)), eval_tol_(eval_tol) {
        const Grid& g = *problem_.grid;
        if (g.has_impedance()) throw ArgumentError("FdHelmholtzMap: impedance sides belong to the scattering map");
        if (!problem_.eps2.empty()) {
            if (problem_.eps2.size() != g.size()) throw ArgumentError("FdHelmholtzMap: eps2 has wrong size");
            for (double e : problem_.eps2)
                if (!(e > 0.0)) throw ArgumentError("FdHelmholtzMap: eps2 must be positive");
        }
        if (!problem_.load.empty() && problem_.load.size() != g.size())
            throw ArgumentError("FdHelmholtzMap: load has wrong size");
        if (!problem_.lifting.empty() && problem_.lifting.size() != g.size())
            throw ArgumentError("FdHelmholtzMap: lifting has wrong size");
        const auto& fr = g.free_nodes();
        mass_eps_ = g.mass(problem_.eps2);
        k_ff_ = space()->stiffness().submatrix(fr, fr);
        m_ff_ = mass_eps_.submatrix(fr, fr);
        // load part of the rhs: (M f - K w_g) on free rows; the z-linear part is M_eps w_g
        cvector fixed(g.size());
        if (!problem_.load.empty()) fixed = space()->mass() * problem_.load;
        if (!problem_.lifting.empty()) {
            const cvector kw = space()->stiffness() * problem_.lifting;
            for (index_t i = 0; i < fixed.size(); ++i) fixed[i] -= kw[i];
            lifted_ = restrict_free(g, mass_eps_ * problem_.lifting);
        }
        fixed_rhs_ = restrict_free(g, fixed);
    }

    const Grid& grid() const noexcept { return *problem_.grid; }
    const HelmholtzProblem& problem() const noexcept { return problem_; }
    const SparseMatrix& weighted_mass() const noexcept { return mass_eps_; }

    SpaceVector evaluate(cplx z) const override {
        linalg::ShiftedSolver solver(k_ff_, m_ff_, z, eval_tol_);
        return finish(solver.solve(rhs_at(z)), true);
    }

    // Generalized eigenvalues of (K_ff, M_eps_ff) closest to Re(center).
    std::vector<double> poles_near(index_t count) const {
        return linalg::nearest_generalized_eigenvalues(k_ff_, m_ff_, center().real(), count);
    }

    // sqrt(r^H K_ff^{-1} r) for r = (K - z M_eps) u - M f on free rows: the
    // residual of a nodal field u in the discrete dual norm.
    double residual_dual_norm(const cvector& u, cplx z) const {
        const Grid& g = grid();
        cvector r = space()->stiffness() * u;
        const cvector mu = mass_eps_ * u;
        for (index_t i = 0; i < r.size(); ++i) r[i] -= z * mu[i];
        if (!problem_.load.empty()) {
            const cvector mf = space()->mass() * problem_.load;
            for (index_t i = 0; i < r.size(); ++i) r[i] -= mf[i];
        }
        const cvector rf = restrict_free(g, r);
        const auto zero = SparseMatrix::from_triplets(k_ff_.rows(), k_ff_.cols(), {});
        const cvector y = linalg::solve_shifted(k_ff_, zero, 0.0, rf, 1e-12);
        return std::sqrt(std::max(0.0, linalg::dot(rf, y).real()));
    }

protected:
    SpaceVector compute_taylor(index_t beta) const override {
        if (!factor_) factor_ = std::make_unique<linalg::ShiftedSolver>(k_ff_, m_ff_, center(), 1e-12);
        if (beta == 0) return finish(factor_->solve(rhs_at(center())), true);
        const cvector rhs = restrict_free(grid(), mass_eps_ * cached(beta - 1).values());
        return finish(factor_->solve(rhs), false);
    }

private:
    static SpacePtr make_space(const HelmholtzProblem& p) {
        if (!p.grid) throw ArgumentError("FdHelmholtzMap: null grid");
        return std::make_shared<const WeightedSpace>(p.grid->stiffness(), p.grid->mass(), std::nullopt, p.weight);
    }

    cvector rhs_at(cplx z) const {
        cvector rhs = fixed_rhs_;
        for (index_t i = 0; i < lifted_.size(); ++i) rhs[i] += z * lifted_[i];
        return rhs;
    }

    SpaceVector finish(const cvector& free_values, bool add_lifting) const {
        cvector full = expand_free(grid(), free_values);
        if (add_lifting && !problem_.lifting.empty())
            for (index_t i = 0; i < full.size(); ++i) full[i] += problem_.lifting[i];
        return SpaceVector(space(), std::move(full));
    }

    HelmholtzProblem problem_;
    double eval_tol_;
    SparseMatrix mass_eps_, k_ff_, m_ff_;
    cvector fixed_rhs_, lifted_;
    mutable std::unique_ptr<linalg::ShiftedSolver> factor_;
};

}  // namespace pademor::maps
