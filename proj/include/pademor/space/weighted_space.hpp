#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "pademor/core/errors.hpp"
#include "pademor/linalg/cholesky.hpp"
#include "pademor/linalg/sparse_matrix.hpp"

namespace pademor {

using linalg::SparseMatrix;

// Discrete weighted H1 context: ||v||_w^2 = v^H (K + w^2 M) v.
class WeightedSpace {
public:
    WeightedSpace(SparseMatrix stiffness, SparseMatrix mass, std::optional<SparseMatrix> boundary_mass, double weight)
        : stiffness_(std::move(stiffness)), mass_(std::move(mass)), boundary_(std::move(boundary_mass)), weight_(weight) {
        const index_t n = stiffness_.rows();
        if (!stiffness_.square() || !mass_.square() || mass_.rows() != n)
            throw ArgumentError("WeightedSpace: stiffness and mass must be square and of equal size");
        if (boundary_ && (!boundary_->square() || boundary_->rows() != n))
            throw ArgumentError("WeightedSpace: boundary mass has wrong size");
        if (!(weight_ > 0.0) || !std::isfinite(weight_)) throw ArgumentError("WeightedSpace: weight must be positive");
        if (!stiffness_.is_hermitian() || !mass_.is_hermitian())
            throw ArgumentError("WeightedSpace: stiffness and mass must be Hermitian");
        gram_ = SparseMatrix::combine(1.0, stiffness_, weight_ * weight_, mass_);
    }

    // Spectral space: stiffness diag(eigenvalues), identity mass.
    static std::shared_ptr<const WeightedSpace> spectral(std::span<const double> eigenvalues, double weight) {
        return std::make_shared<const WeightedSpace>(SparseMatrix::diagonal(eigenvalues),
                                                     SparseMatrix::identity(eigenvalues.size()), std::nullopt, weight);
    }

    std::shared_ptr<const WeightedSpace> with_weight(double weight) const {
        return std::make_shared<const WeightedSpace>(stiffness_, mass_, boundary_, weight);
    }

    index_t size() const noexcept { return stiffness_.rows(); }
    double weight() const noexcept { return weight_; }
    const SparseMatrix& stiffness() const noexcept { return stiffness_; }
    const SparseMatrix& mass() const noexcept { return mass_; }
    const std::optional<SparseMatrix>& boundary_mass() const noexcept { return boundary_; }
    const SparseMatrix& gram() const noexcept { return gram_; }  // K + w^2 M

    // v^H (K + w^2 M) u
    cplx inner(std::span<const cplx> u, std::span<const cplx> v) const {
        if (u.size() != size() || v.size() != size()) throw ArgumentError("WeightedSpace::inner: size mismatch");
        cplx s = 0.0;
        const auto off = gram_.offsets();
        const auto col = gram_.columns();
        const auto val = gram_.values();
        for (index_t i = 0; i < size(); ++i) {
            cplx row = 0.0;
            for (index_t k = off[i]; k < off[i + 1]; ++k) row += val[k] * u[col[k]];
            s += std::conj(v[i]) * row;
        }
        return s;
    }

    // L^H u with K + w^2 M = L L^H: the same norm in Euclidean coordinates.
    cvector to_euclidean(std::span<const cplx> u) const {
        std::call_once(factor_once_, [this] { factor_ = linalg::BandedCholesky(gram_); });
        return factor_.apply_lh(u);
    }

private:
    SparseMatrix stiffness_;
    SparseMatrix mass_;
    std::optional<SparseMatrix> boundary_;
    double weight_;
    SparseMatrix gram_;
    mutable std::once_flag factor_once_;
    mutable linalg::BandedCholesky factor_;
};

using SpacePtr = std::shared_ptr<const WeightedSpace>;

// Degrees of freedom tied to a space.
class SpaceVector {
public:
    SpaceVector() = default;
    explicit SpaceVector(SpacePtr space) : space_(std::move(space)), values_(space_ ? space_->size() : 0) {}
    SpaceVector(SpacePtr space, cvector values) : space_(std::move(space)), values_(std::move(values)) {
        if (!space_) throw ArgumentError("SpaceVector: null space");
        if (values_.size() != space_->size())
            throw ArgumentError("SpaceVector: " + std::to_string(values_.size()) + " values for a space of dimension " +
                                std::to_string(space_->size()));
    }

    const SpacePtr& space() const noexcept { return space_; }
    const cvector& values() const noexcept { return values_; }
    cvector& values() noexcept { return values_; }
    index_t size() const noexcept { return values_.size(); }
    cplx operator[](index_t i) const { return values_[i]; }
    cplx& operator[](index_t i) { return values_[i]; }

    SpaceVector& operator+=(const SpaceVector& o) {
        check(o);
        for (index_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    SpaceVector& operator-=(const SpaceVector& o) {
        check(o);
        for (index_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    SpaceVector& operator*=(cplx c) {
        for (auto& v : values_) v *= c;
        return *this;
    }
    SpaceVector& operator/=(cplx c) {
        for (auto& v : values_) v /= c;
        return *this;
    }
    // this += c * o
    SpaceVector& axpy(cplx c, const SpaceVector& o) {
        check(o);
        for (index_t i = 0; i < values_.size(); ++i) values_[i] += c * o.values_[i];
        return *this;
    }

    friend SpaceVector operator+(SpaceVector a, const SpaceVector& b) { return a += b; }
    friend SpaceVector operator-(SpaceVector a, const SpaceVector& b) { return a -= b; }
    friend SpaceVector operator*(cplx c, SpaceVector a) { return a *= c; }
    friend SpaceVector operator*(SpaceVector a, cplx c) { return a *= c; }
    friend SpaceVector operator/(SpaceVector a, cplx c) { return a /= c; }

    bool same_space(const SpaceVector& o) const noexcept { return space_ == o.space_; }

private:
    void check(const SpaceVector& o) const {
        if (space_ != o.space_) throw ArgumentError("SpaceVector: vectors belong to different spaces");
    }

    SpacePtr space_;
    cvector values_;
};

inline cplx inner(const SpaceVector& u, const SpaceVector& v) {
    if (!u.space() || u.space() != v.space()) throw ArgumentError("inner: vectors belong to different spaces");
    return u.space()->inner(u.values(), v.values());
}

// Same pairing with w = 0 (gradient part only).
inline cplx inner_with_weight_0(const SpaceVector& u, const SpaceVector& v) {
    if (!u.space() || u.space() != v.space()) throw ArgumentError("inner: vectors belong to different spaces");
    return linalg::dot(v.values(), u.space()->stiffness() * u.values());
}

inline double norm(const SpaceVector& u) {
    if (!u.space()) throw ArgumentError("norm: vector without space");
    return std::sqrt(std::max(0.0, u.space()->inner(u.values(), u.values()).real()));
}

}  // namespace pademor
