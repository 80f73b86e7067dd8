#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pademor/core/errors.hpp"
#include "pademor/core/types.hpp"

namespace pademor::linalg {

struct Triplet {
    index_t row;
    index_t col;
    cplx value;
};

// Compressed row storage, immutable once built.
class SparseMatrix {
public:
    SparseMatrix() = default;

    // Duplicate (row, col) pairs are summed.
    static SparseMatrix from_triplets(index_t rows, index_t cols, std::vector<Triplet> entries) {
        for (const auto& t : entries) {
            if (t.row >= rows || t.col >= cols)
                throw ArgumentError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                    ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
        }
        std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        SparseMatrix m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.offsets_.assign(rows + 1, 0);
        for (std::size_t k = 0; k < entries.size();) {
            std::size_t j = k;
            cplx sum = 0.0;
            while (j < entries.size() && entries[j].row == entries[k].row && entries[j].col == entries[k].col)
                sum += entries[j++].value;
            m.columns_.push_back(entries[k].col);
            m.values_.push_back(sum);
            ++m.offsets_[entries[k].row + 1];
            k = j;
        }
        for (index_t i = 0; i < rows; ++i) m.offsets_[i + 1] += m.offsets_[i];
        return m;
    }

    static SparseMatrix identity(index_t n) { return diagonal(cvector(n, 1.0)); }

    static SparseMatrix diagonal(std::span<const cplx> d) {
        std::vector<Triplet> t;
        t.reserve(d.size());
        for (index_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
        return from_triplets(d.size(), d.size(), std::move(t));
    }

    static SparseMatrix diagonal(std::span<const double> d) {
        cvector c(d.begin(), d.end());
        return diagonal(std::span<const cplx>(c));
    }

    index_t rows() const noexcept { return rows_; }
    index_t cols() const noexcept { return cols_; }
    index_t nnz() const noexcept { return values_.size(); }
    bool square() const noexcept { return rows_ == cols_; }

    std::span<const index_t> offsets() const noexcept { return offsets_; }
    std::span<const index_t> columns() const noexcept { return columns_; }
    std::span<const cplx> values() const noexcept { return values_; }

    cplx at(index_t i, index_t j) const {
        if (i >= rows_ || j >= cols_) throw ArgumentError("SparseMatrix::at out of range");
        auto first = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
        auto last = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
        auto it = std::lower_bound(first, last, j);
        if (it == last || *it != j) return 0.0;
        return values_[static_cast<std::size_t>(it - columns_.begin())];
    }

    // y = A x
    void multiply(std::span<const cplx> x, std::span<cplx> y) const {
        if (x.size() != cols_ || y.size() != rows_) throw ArgumentError("SparseMatrix::multiply: size mismatch");
        for (index_t i = 0; i < rows_; ++i) {
            cplx s = 0.0;
            for (index_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += values_[k] * x[columns_[k]];
            y[i] = s;
        }
    }

    cvector operator*(std::span<const cplx> x) const {
        cvector y(rows_);
        multiply(x, y);
        return y;
    }

    // a*A + b*B, same shape.
    static SparseMatrix combine(cplx a, const SparseMatrix& A, cplx b, const SparseMatrix& B) {
        if (A.rows_ != B.rows_ || A.cols_ != B.cols_) throw ArgumentError("SparseMatrix::combine: shape mismatch");
        std::vector<Triplet> t;
        t.reserve(A.nnz() + B.nnz());
        A.append_scaled(a, t);
        B.append_scaled(b, t);
        return from_triplets(A.rows_, A.cols_, std::move(t));
    }

    // Keeps the listed rows and columns, in the given order.
    SparseMatrix submatrix(std::span<const index_t> keep_rows, std::span<const index_t> keep_cols) const {
        std::vector<index_t> col_map(cols_, npos);
        for (index_t k = 0; k < keep_cols.size(); ++k) {
            if (keep_cols[k] >= cols_) throw ArgumentError("submatrix: column out of range");
            col_map[keep_cols[k]] = k;
        }
        std::vector<Triplet> t;
        for (index_t r = 0; r < keep_rows.size(); ++r) {
            const index_t i = keep_rows[r];
            if (i >= rows_) throw ArgumentError("submatrix: row out of range");
            for (index_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
                if (col_map[columns_[k]] != npos) t.push_back({r, col_map[columns_[k]], values_[k]});
        }
        return from_triplets(keep_rows.size(), keep_cols.size(), std::move(t));
    }

    // (lower, upper) bandwidths over stored entries.
    std::pair<index_t, index_t> bandwidths() const noexcept {
        index_t lo = 0, up = 0;
        for (index_t i = 0; i < rows_; ++i)
            for (index_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
                const index_t j = columns_[k];
                if (j < i) lo = std::max(lo, i - j);
                else up = std::max(up, j - i);
            }
        return {lo, up};
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    bool is_hermitian(double rel_tol = 1e-12) const {
        if (!square()) return false;
        const double tol = rel_tol * std::max(max_abs(), 1e-300);
        for (index_t i = 0; i < rows_; ++i)
            for (index_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
                if (std::abs(values_[k] - std::conj(at(columns_[k], i))) > tol) return false;
        return true;
    }

    static constexpr index_t npos = static_cast<index_t>(-1);

private:
    void append_scaled(cplx s, std::vector<Triplet>& t) const {
        for (index_t i = 0; i < rows_; ++i)
            for (index_t k = offsets_[i]; k < offsets_[i + 1]; ++k) t.push_back({i, columns_[k], s * values_[k]});
    }

    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<index_t> offsets_{0};
    std::vector<index_t> columns_;
    cvector values_;
};

inline double norm2(std::span<const cplx> v) {
    // scaled to avoid overflow for the huge Taylor coefficients near poles
    double scale = 0.0, ssq = 1.0;
    for (const auto& z : v) {
        for (double c : {z.real(), z.imag()}) {
            if (c == 0.0) continue;
            const double a = std::abs(c);
            if (scale < a) {
                ssq = 1.0 + ssq * (scale / a) * (scale / a);
                scale = a;
            } else {
                ssq += (a / scale) * (a / scale);
            }
        }
    }
    return scale * std::sqrt(ssq);
}

inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {  // sum conj(a_i) b_i
    cplx s = 0.0;
    for (index_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace pademor::linalg
