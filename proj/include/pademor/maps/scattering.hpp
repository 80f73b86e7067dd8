#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "pademor/maps/helmholtz_map.hpp"

namespace pademor::maps {

// Nodes of the impedance boundary with their outward normal.
struct ImpedanceNode {
    Point x;
    Point normal;
};

// (1/b!) d^b/dz^b [ i z (d.n - 1) e^{i z d.x} ] at z0, per node.
inline cvector impedance_taylor(index_t beta, cplx z0, Point d, const std::vector<ImpedanceNode>& nodes) {
    if (std::abs(std::hypot(d.x, d.y) - 1.0) > 1e-12) throw ArgumentError("impedance_taylor: direction must be unit");
    const cplx i(0.0, 1.0);
    cvector out(nodes.size());
    for (index_t k = 0; k < nodes.size(); ++k) {
        const auto& nd = nodes[k];
        const double dn = d.x * nd.normal.x + d.y * nd.normal.y - 1.0;
        if (dn == 0.0) continue;
        const double dx = d.x * nd.x.x + d.y * nd.x.y;
        const cplx a = i * dx;
        const cplx e = std::exp(a * z0);
        // a^b / b! and a^(b-1)/(b-1)! built up together
        cplx pb = 1.0, pb1 = 0.0;
        for (index_t j = 1; j <= beta; ++j) {
            pb1 = pb;
            pb = pb * a / static_cast<double>(j);
        }
        cplx v = i * z0 * dn * pb * e;
        if (beta > 0) v += i * dn * pb1 * e;
        out[k] = v;
    }
    return out;
}

struct ScatteringSetup {
    double h = 0.05;
    double theta = 0.0;       // incident direction angle
    double half_width = 2.0;  // outer box [-a, a]^2
    double obstacle = 0.5;    // obstacle [-b, b]^2
};

inline GridPtr scattering_grid(const ScatteringSetup& s) {
    const double cells_d = 2.0 * s.half_width / s.h;
    const auto cells = static_cast<index_t>(std::llround(cells_d));
    if (std::abs(cells_d - static_cast<double>(cells)) > 1e-9)
        throw ArgumentError("scattering grid: h must divide the box width");
    fd::GridSpec g;
    g.domain = {-s.half_width, s.half_width, -s.half_width, s.half_width};
    g.nx = g.ny = cells;
    g.sides = {fd::BoundaryKind::impedance, fd::BoundaryKind::impedance, fd::BoundaryKind::impedance,
               fd::BoundaryKind::impedance};
    g.obstacle = fd::Box{-s.obstacle, s.obstacle, -s.obstacle, s.obstacle};
    return std::make_shared<const Grid>(g);
}

// Total field around a sound-soft square, first-order absorbing outer
// boundary. Here z is the wavenumber: A(z) = K - z^2 M - i z B.
class FdScatteringMap : public ResponseMap {
public:
    FdScatteringMap(GridPtr grid, double theta, cplx center, double weight = -1.0, double eval_tol = 1e-10)
        : ResponseMap(make_space(grid, weight > 0.0 ? weight : center.real()), center),
          grid_(std::move(grid)),
          direction_{std::cos(theta), std::sin(theta)},
          eval_tol_(eval_tol) {
        const auto& fr = grid_->free_nodes();
        k_ff_ = space()->stiffness().submatrix(fr, fr);
        m_ff_ = space()->mass().submatrix(fr, fr);
        b_ff_ = space()->boundary_mass()->submatrix(fr, fr);
        for (const auto& b : grid_->impedance_points()) nodes_.push_back({grid_->point(b.node), b.normal});
    }

    const Grid& grid() const noexcept { return *grid_; }
    Point direction() const noexcept { return direction_; }

    SpaceVector evaluate(cplx z) const override {
        const cplx i(0.0, 1.0);
        const auto a = SparseMatrix::combine(1.0, k_ff_, -i * z, b_ff_);
        linalg::ShiftedSolver solver(a, m_ff_, z * z, eval_tol_);
        return to_space(solver.solve(boundary_load(impedance_taylor(0, z, direction_, nodes_))));
    }

    // Nodal right-hand side from impedance data given per quadrature point.
    cvector boundary_load(const cvector& g) const {
        cvector full(grid_->size());
        const auto& pts = grid_->impedance_points();
        for (index_t k = 0; k < pts.size(); ++k) full[pts[k].node] += pts[k].weight * g[k];
        return restrict_free(*grid_, full);
    }

protected:
    SpaceVector compute_taylor(index_t beta) const override {
        const cplx i(0.0, 1.0);
        const cplx z0 = center();
        if (!factor_) {
            const auto a = SparseMatrix::combine(1.0, k_ff_, -i * z0, b_ff_);
            factor_ = std::make_unique<linalg::ShiftedSolver>(a, m_ff_, z0 * z0, 1e-12);
        }
        cvector rhs = boundary_load(impedance_taylor(beta, z0, direction_, nodes_));
        if (beta >= 1) {
            const cvector s1 = restrict_free(*grid_, cached(beta - 1).values());
            const cvector m1 = m_ff_ * s1, b1 = b_ff_ * s1;
            for (index_t k = 0; k < rhs.size(); ++k) rhs[k] += 2.0 * z0 * m1[k] + i * b1[k];
        }
        if (beta >= 2) {
            const cvector m2 = m_ff_ * restrict_free(*grid_, cached(beta - 2).values());
            for (index_t k = 0; k < rhs.size(); ++k) rhs[k] += m2[k];
        }
        return to_space(factor_->solve(rhs));
    }

private:
    static SpacePtr make_space(const GridPtr& g, double weight) {
        if (!g) throw ArgumentError("FdScatteringMap: null grid");
        if (!g->has_impedance()) throw ArgumentError("FdScatteringMap: grid has no impedance boundary");
        return std::make_shared<const WeightedSpace>(g->stiffness(), g->mass(), g->boundary_mass(), weight);
    }

    SpaceVector to_space(const cvector& free_values) const {
        return SpaceVector(space(), expand_free(*grid_, free_values));
    }

    GridPtr grid_;
    Point direction_;
    double eval_tol_;
    SparseMatrix k_ff_, m_ff_, b_ff_;
    std::vector<ImpedanceNode> nodes_;
    mutable std::unique_ptr<linalg::ShiftedSolver> factor_;
};

}  // namespace pademor::maps
