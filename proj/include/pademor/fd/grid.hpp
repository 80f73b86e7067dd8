#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pademor/core/errors.hpp"
#include "pademor/linalg/sparse_matrix.hpp"

namespace pademor::fd {

using linalg::SparseMatrix;
using linalg::Triplet;

enum class BoundaryKind { dirichlet, neumann, impedance };
enum Side : int { left = 0, right = 1, bottom = 2, top = 3 };

struct Box {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

struct GridSpec {
    Box domain;
    index_t nx = 0;  // cells per direction
    index_t ny = 0;
    std::array<BoundaryKind, 4> sides{BoundaryKind::dirichlet, BoundaryKind::dirichlet, BoundaryKind::dirichlet,
                                      BoundaryKind::dirichlet};
    std::optional<Box> obstacle;  // Dirichlet, grid aligned, strictly inside
};

// One impedance quadrature entry: half an edge attached to a node.
struct BoundaryPoint {
    index_t node;
    Point normal;
    double weight;
};

// Uniform node-based grid. Every domain node is a degree of freedom, Dirichlet
// nodes included (solves are restricted to the free ones). Nodes strictly
// inside the obstacle are dropped. Matrices follow the trapezoid rule cell by
// cell, which reproduces the 5-point stencil with ghost-node elimination at
// Neumann and impedance sides.
class Grid {
public:
    explicit Grid(GridSpec spec) : spec_(spec) {
        if (spec_.nx < 2 || spec_.ny < 2) throw ArgumentError("Grid: need at least 2 cells per direction");
        const Box& d = spec_.domain;
        if (!(d.x1 > d.x0) || !(d.y1 > d.y0)) throw ArgumentError("Grid: empty domain");
        h_ = (d.x1 - d.x0) / static_cast<double>(spec_.nx);
        const double hy = (d.y1 - d.y0) / static_cast<double>(spec_.ny);
        if (std::abs(hy - h_) > 1e-12 * h_) throw ArgumentError("Grid: spacing must be equal in x and y");
        if (spec_.obstacle) locate_obstacle();

        const index_t nxn = spec_.nx + 1, nyn = spec_.ny + 1;
        node_of_.assign(nxn * nyn, npos);
        for (index_t j = 0; j < nyn; ++j)
            for (index_t i = 0; i < nxn; ++i) {
                if (strictly_in_obstacle(i, j)) continue;
                node_of_[j * nxn + i] = ij_.size();
                ij_.push_back({i, j});
            }
        dirichlet_.assign(ij_.size(), false);
        for (index_t k = 0; k < ij_.size(); ++k) {
            const auto [i, j] = ij_[k];
            bool dir = on_obstacle_boundary(i, j);
            if (i == 0 && spec_.sides[left] == BoundaryKind::dirichlet) dir = true;
            if (i == spec_.nx && spec_.sides[right] == BoundaryKind::dirichlet) dir = true;
            if (j == 0 && spec_.sides[bottom] == BoundaryKind::dirichlet) dir = true;
            if (j == spec_.ny && spec_.sides[top] == BoundaryKind::dirichlet) dir = true;
            dirichlet_[k] = dir;
            (dir ? dirichlet_nodes_ : free_nodes_).push_back(k);
        }
        build_boundary();
    }

    const GridSpec& spec() const noexcept { return spec_; }
    double h() const noexcept { return h_; }
    index_t size() const noexcept { return ij_.size(); }
    index_t nx() const noexcept { return spec_.nx; }
    index_t ny() const noexcept { return spec_.ny; }

    Point point(index_t node) const {
        const auto [i, j] = ij_.at(node);
        return {spec_.domain.x0 + h_ * static_cast<double>(i), spec_.domain.y0 + h_ * static_cast<double>(j)};
    }
    std::array<index_t, 2> grid_index(index_t node) const { return ij_.at(node); }
    index_t node_at(index_t i, index_t j) const {
        if (i > spec_.nx || j > spec_.ny) return npos;
        return node_of_[j * (spec_.nx + 1) + i];
    }

    bool is_dirichlet(index_t node) const { return dirichlet_.at(node); }
    const std::vector<index_t>& free_nodes() const noexcept { return free_nodes_; }
    const std::vector<index_t>& dirichlet_nodes() const noexcept { return dirichlet_nodes_; }
    const std::vector<BoundaryPoint>& impedance_points() const noexcept { return boundary_points_; }

    bool cell_in_domain(index_t i, index_t j) const {
        if (i >= spec_.nx || j >= spec_.ny) return false;
        return !(has_obstacle_ && i >= oi0_ && i < oi1_ && j >= oj0_ && j < oj1_);
    }

    // Discrete integral of grad u . grad conj(v).
    SparseMatrix stiffness() const {
        std::vector<Triplet> t;
        auto edge = [&](index_t a, index_t b, double w) {
            t.push_back({a, a, w});
            t.push_back({b, b, w});
            t.push_back({a, b, -w});
            t.push_back({b, a, -w});
        };
        for (index_t k = 0; k < size(); ++k) {
            const auto [i, j] = ij_[k];
            if (i < spec_.nx) {
                const index_t r = node_at(i + 1, j);
                const int cells = cell(i, j) + (j > 0 ? cell(i, j - 1) : 0);
                if (r != npos && cells > 0) edge(k, r, 0.5 * cells);
            }
            if (j < spec_.ny) {
                const index_t u = node_at(i, j + 1);
                const int cells = cell(i, j) + (i > 0 ? cell(i - 1, j) : 0);
                if (u != npos && cells > 0) edge(k, u, 0.5 * cells);
            }
        }
        return SparseMatrix::from_triplets(size(), size(), std::move(t));
    }

    // Lumped trapezoid weights h^2 * (adjacent cells)/4.
    std::vector<double> mass_weights() const {
        std::vector<double> m(size());
        for (index_t k = 0; k < size(); ++k) {
            const auto [i, j] = ij_[k];
            int cells = cell(i, j);
            if (i > 0) cells += cell(i - 1, j);
            if (j > 0) cells += cell(i, j - 1);
            if (i > 0 && j > 0) cells += cell(i - 1, j - 1);
            m[k] = h_ * h_ * 0.25 * cells;
        }
        return m;
    }

    SparseMatrix mass(std::span<const double> coefficient = {}) const {
        auto m = mass_weights();
        if (!coefficient.empty()) {
            if (coefficient.size() != size()) throw ArgumentError("Grid::mass: coefficient has wrong size");
            for (index_t k = 0; k < size(); ++k) m[k] *= coefficient[k];
        }
        return SparseMatrix::diagonal(std::span<const double>(m));
    }

    // Lumped integral over the impedance sides.
    SparseMatrix boundary_mass() const {
        std::vector<Triplet> t;
        for (const auto& b : boundary_points_) t.push_back({b.node, b.node, b.weight});
        return SparseMatrix::from_triplets(size(), size(), std::move(t));
    }

    bool has_impedance() const noexcept { return !boundary_points_.empty(); }

    template <class F>
    cvector interpolate(F&& f) const {
        cvector v(size());
        for (index_t k = 0; k < size(); ++k) v[k] = f(point(k));
        return v;
    }

    static constexpr index_t npos = static_cast<index_t>(-1);

private:
    int cell(index_t i, index_t j) const { return cell_in_domain(i, j) ? 1 : 0; }

    void locate_obstacle() {
        const Box& o = *spec_.obstacle;
        const Box& d = spec_.domain;
        auto snap = [&](double v, double origin, const char* what) {
            const double r = (v - origin) / h_;
            const double k = std::round(r);
            if (std::abs(r - k) > 1e-9) throw ArgumentError(std::string("Grid: obstacle ") + what + " not on a grid line");
            return static_cast<index_t>(k);
        };
        if (!(o.x0 > d.x0 && o.x1 < d.x1 && o.y0 > d.y0 && o.y1 < d.y1 && o.x1 > o.x0 && o.y1 > o.y0))
            throw ArgumentError("Grid: obstacle must lie strictly inside the domain");
        oi0_ = snap(o.x0, d.x0, "x0");
        oi1_ = snap(o.x1, d.x0, "x1");
        oj0_ = snap(o.y0, d.y0, "y0");
        oj1_ = snap(o.y1, d.y0, "y1");
        has_obstacle_ = true;
    }

    bool strictly_in_obstacle(index_t i, index_t j) const {
        return has_obstacle_ && i > oi0_ && i < oi1_ && j > oj0_ && j < oj1_;
    }
    bool on_obstacle_boundary(index_t i, index_t j) const {
        if (!has_obstacle_) return false;
        const bool in_x = i >= oi0_ && i <= oi1_, in_y = j >= oj0_ && j <= oj1_;
        return in_x && in_y && !strictly_in_obstacle(i, j);
    }

    void build_boundary() {
        auto add_edge = [&](index_t a, index_t b, Point n) {
            boundary_points_.push_back({a, n, 0.5 * h_});
            boundary_points_.push_back({b, n, 0.5 * h_});
        };
        const index_t nx = spec_.nx, ny = spec_.ny;
        if (spec_.sides[bottom] == BoundaryKind::impedance)
            for (index_t i = 0; i < nx; ++i) add_edge(node_at(i, 0), node_at(i + 1, 0), {0.0, -1.0});
        if (spec_.sides[top] == BoundaryKind::impedance)
            for (index_t i = 0; i < nx; ++i) add_edge(node_at(i, ny), node_at(i + 1, ny), {0.0, 1.0});
        if (spec_.sides[left] == BoundaryKind::impedance)
            for (index_t j = 0; j < ny; ++j) add_edge(node_at(0, j), node_at(0, j + 1), {-1.0, 0.0});
        if (spec_.sides[right] == BoundaryKind::impedance)
            for (index_t j = 0; j < ny; ++j) add_edge(node_at(nx, j), node_at(nx, j + 1), {1.0, 0.0});
    }

    GridSpec spec_;
    double h_ = 0.0;
    bool has_obstacle_ = false;
    index_t oi0_ = 0, oi1_ = 0, oj0_ = 0, oj1_ = 0;
    std::vector<index_t> node_of_;
    std::vector<std::array<index_t, 2>> ij_;
    std::vector<bool> dirichlet_;
    std::vector<index_t> free_nodes_, dirichlet_nodes_;
    std::vector<BoundaryPoint> boundary_points_;
};

// Unit square-type helpers.
inline GridSpec dirichlet_square(double a, double b, index_t cells) {
    GridSpec s;
    s.domain = {a, b, a, b};
    s.nx = s.ny = cells;
    return s;
}

}  // namespace pademor::fd
