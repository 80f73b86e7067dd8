#pragma once

#include <cmath>
#include <span>
#include <string>

#include "pademor/core/errors.hpp"
#include "pademor/linalg/sparse_matrix.hpp"

namespace pademor::linalg {

// W = L L^H for Hermitian positive-definite band matrices; lower band kept.
class BandedCholesky {
public:
    BandedCholesky() = default;

    explicit BandedCholesky(const SparseMatrix& w) {
        if (!w.square()) throw ArgumentError("BandedCholesky: matrix must be square");
        n_ = w.rows();
        b_ = w.bandwidths().first;
        l_.assign(n_ * (b_ + 1), cplx{});
        for (index_t i = 0; i < n_; ++i)
            for (index_t k = w.offsets()[i]; k < w.offsets()[i + 1]; ++k) {
                const index_t j = w.columns()[k];
                if (j <= i) at(i, j) = w.values()[k];
            }
        for (index_t j = 0; j < n_; ++j) {
            const index_t first = j > b_ ? j - b_ : 0;
            double d = at(j, j).real();
            for (index_t s = first; s < j; ++s) d -= std::norm(at(j, s));
            if (!(d > 0.0)) throw ArgumentError("BandedCholesky: matrix is not positive definite (row " + std::to_string(j) + ")");
            const double ljj = std::sqrt(d);
            at(j, j) = ljj;
            const index_t last = std::min(n_ - 1, j + b_);
            for (index_t i = j + 1; i <= last; ++i) {
                cplx s = at(i, j);
                const index_t lo = i > b_ ? i - b_ : 0;
                for (index_t t = std::max(first, lo); t < j; ++t) s -= at(i, t) * std::conj(at(j, t));
                at(i, j) = s / ljj;
            }
        }
    }

    index_t size() const noexcept { return n_; }

    // y = L^H u, so that ||y||_2^2 = u^H W u.
    cvector apply_lh(std::span<const cplx> u) const {
        if (u.size() != n_) throw ArgumentError("BandedCholesky::apply_lh: size mismatch");
        cvector y(n_);
        for (index_t i = 0; i < n_; ++i) {
            cplx s = 0.0;
            const index_t last = std::min(n_ - 1, i + b_);
            for (index_t k = i; k <= last; ++k) s += std::conj(at(k, i)) * u[k];
            y[i] = s;
        }
        return y;
    }

private:
    cplx& at(index_t i, index_t j) { return l_[i * (b_ + 1) + (i - j)]; }
    const cplx& at(index_t i, index_t j) const { return l_[i * (b_ + 1) + (i - j)]; }

    index_t n_ = 0, b_ = 0;
    cvector l_;
};

}  // namespace pademor::linalg
