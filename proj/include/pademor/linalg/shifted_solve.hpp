#pragma once

#include <memory>
#include <optional>
#include <span>
#include <sstream>

#include "pademor/core/errors.hpp"
#include "pademor/linalg/banded_lu.hpp"
#include "pademor/linalg/bicgstab.hpp"
#include "pademor/linalg/sparse_matrix.hpp"

namespace pademor::linalg {

enum class SolverKind { automatic, banded, iterative };

// Factors A - shift*M once and reuses it for every right-hand side.
class ShiftedSolver {
public:
    ShiftedSolver(const SparseMatrix& a, const SparseMatrix& m, cplx shift, double tol = 1e-12,
                  SolverKind kind = SolverKind::automatic)
        : shift_(shift), tol_(tol) {
        if (!a.square() || !m.square() || a.rows() != m.rows())
            throw ArgumentError("ShiftedSolver: A and M must be square and of equal size");
        if (!(tol > 0.0)) throw ArgumentError("ShiftedSolver: tol must be positive");
        op_ = SparseMatrix::combine(1.0, a, -shift, m);
        if (kind == SolverKind::automatic) kind = prefers_banded(op_) ? SolverKind::banded : SolverKind::iterative;
        kind_ = kind;
        if (kind_ == SolverKind::banded) {
            try {
                lu_.emplace(op_);
            } catch (const SolverError& e) {
                throw SolverError(e.what(), e.residual(), shift_);
            }
        }
    }

    const SparseMatrix& shifted_matrix() const noexcept { return op_; }
    SolverKind kind() const noexcept { return kind_; }
    cplx shift() const noexcept { return shift_; }

    cvector solve(std::span<const cplx> rhs) const {
        const index_t n = op_.rows();
        if (rhs.size() != n) throw ArgumentError("ShiftedSolver::solve: rhs has wrong size");
        const double bnorm = norm2(rhs);
        if (bnorm == 0.0) return cvector(n);
        cvector x;
        double rel = 0.0;
        if (kind_ == SolverKind::banded) {
            x = lu_->solve(rhs);
            cvector r(n);
            rel = residual(rhs, x, r) / bnorm;
            // a few refinement steps with the same factors
            for (int step = 0; step < 3 && rel > tol_ && std::isfinite(rel); ++step) {
                lu_->solve_in_place(r);
                for (index_t i = 0; i < n; ++i) x[i] += r[i];
                rel = residual(rhs, x, r) / bnorm;
            }
        } else {
            auto res = bicgstab(op_, rhs, tol_, 10 * n);
            x = std::move(res.x);
            rel = res.residual;
        }
        if (!(rel <= tol_)) {
            std::ostringstream msg;
            msg << "shifted solve at z = " << shift_ << " did not reach tolerance " << tol_ << " (residual " << rel
                << ")";
            throw SolverError(msg.str(), rel, shift_);
        }
        return x;
    }

    static bool prefers_banded(const SparseMatrix& a) {
        const auto [lo, up] = a.bandwidths();
        const index_t width = 2 * lo + up + 1;
        return a.rows() <= 512 || width * 4 <= a.rows();
    }

private:
    double residual(std::span<const cplx> b, std::span<const cplx> x, std::span<cplx> r) const {
        op_.multiply(x, r);
        for (index_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
        return norm2(r);
    }

    SparseMatrix op_;
    cplx shift_;
    double tol_;
    SolverKind kind_ = SolverKind::banded;
    std::optional<BandedLU> lu_;
};

inline cvector solve_shifted(const SparseMatrix& a, const SparseMatrix& m, cplx shift, std::span<const cplx> rhs,
                             double tol = 1e-12, SolverKind kind = SolverKind::automatic) {
    if (rhs.size() != a.rows()) throw ArgumentError("solve_shifted: rhs has wrong size");
    return ShiftedSolver(a, m, shift, tol, kind).solve(rhs);
}

}  // namespace pademor::linalg
