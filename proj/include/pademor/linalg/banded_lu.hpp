#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pademor/core/errors.hpp"
#include "pademor/linalg/sparse_matrix.hpp"

namespace pademor::linalg {

// LU with partial pivoting on a band matrix (gbtrf layout: the upper band
// grows by kl to hold pivoting fill-in). Multipliers stay where they were
// written, so the forward sweep replays the row swaps step by step.
class BandedLU {
public:
    BandedLU() = default;

    explicit BandedLU(const SparseMatrix& a) {
        if (!a.square()) throw ArgumentError("BandedLU: matrix must be square");
        n_ = a.rows();
        std::tie(kl_, ku_) = a.bandwidths();
        width_ = 2 * kl_ + ku_ + 1;
        band_.assign(n_ * width_, cplx{});
        piv_.resize(n_);
        for (index_t i = 0; i < n_; ++i)
            for (index_t k = a.offsets()[i]; k < a.offsets()[i + 1]; ++k) at(i, a.columns()[k]) = a.values()[k];
        factor();
    }

    index_t size() const noexcept { return n_; }
    index_t lower() const noexcept { return kl_; }
    index_t upper() const noexcept { return ku_; }

    void solve_in_place(std::span<cplx> b) const {
        if (b.size() != n_) throw ArgumentError("BandedLU::solve: size mismatch");
        for (index_t k = 0; k < n_; ++k) {
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
            const cplx bk = b[k];
            if (bk == cplx{}) continue;
            const index_t last = std::min(n_ - 1, k + kl_);
            for (index_t i = k + 1; i <= last; ++i) b[i] -= at(i, k) * bk;
        }
        const index_t reach = ku_ + kl_;
        for (index_t k = n_; k-- > 0;) {
            cplx s = b[k];
            const index_t last = std::min(n_ - 1, k + reach);
            for (index_t j = k + 1; j <= last; ++j) s -= at(k, j) * b[j];
            b[k] = s / at(k, k);
        }
    }

    cvector solve(std::span<const cplx> b) const {
        cvector x(b.begin(), b.end());
        solve_in_place(x);
        return x;
    }

private:
    cplx& at(index_t i, index_t j) { return band_[i * width_ + (j + kl_ - i)]; }
    const cplx& at(index_t i, index_t j) const { return band_[i * width_ + (j + kl_ - i)]; }

    void factor() {
        const index_t reach = ku_ + kl_;
        for (index_t k = 0; k < n_; ++k) {
            const index_t last_row = std::min(n_ - 1, k + kl_);
            index_t p = k;
            double best = std::abs(at(k, k));
            for (index_t i = k + 1; i <= last_row; ++i) {
                const double v = std::abs(at(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (best == 0.0)
                throw SolverError("BandedLU: exactly singular pivot at column " + std::to_string(k),
                                  std::numeric_limits<double>::infinity());
            piv_[k] = p;
            const index_t last_col = std::min(n_ - 1, k + reach);
            if (p != k)
                for (index_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
            const cplx inv = 1.0 / at(k, k);
            for (index_t i = k + 1; i <= last_row; ++i) {
                cplx& lik = at(i, k);
                if (lik == cplx{}) continue;
                lik *= inv;
                for (index_t j = k + 1; j <= last_col; ++j) at(i, j) -= lik * at(k, j);
            }
        }
    }

    index_t n_ = 0, kl_ = 0, ku_ = 0, width_ = 1;
    cvector band_;
    std::vector<index_t> piv_;
};

}  // namespace pademor::linalg
