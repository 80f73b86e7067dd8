#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "pademor/core/errors.hpp"
#include "pademor/core/types.hpp"

namespace pademor::linalg {

// Square complex matrix, row-major full storage, Hermitian up to 1e-12 relative.
class DenseHermitian {
public:
    DenseHermitian() = default;
    explicit DenseHermitian(index_t n) : n_(n), a_(n * n) {}

    // Checks the Hermitian property then stores (G + G^H)/2.
    DenseHermitian(index_t n, cvector entries) : n_(n), a_(std::move(entries)) {
        if (a_.size() != n * n) throw ArgumentError("DenseHermitian: expected " + std::to_string(n * n) + " entries");
        double mx = 0.0;
        for (const auto& v : a_) mx = std::max(mx, std::abs(v));
        for (index_t i = 0; i < n_; ++i)
            for (index_t j = i; j < n_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > 1e-12 * mx)
                    throw ArgumentError("DenseHermitian: entries (" + std::to_string(i) + "," + std::to_string(j) +
                                        ") violate Hermitian symmetry");
        symmetrize();
    }

    index_t size() const noexcept { return n_; }
    cplx& operator()(index_t i, index_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(index_t i, index_t j) const { return a_[i * n_ + j]; }
    const cvector& data() const noexcept { return a_; }

    void symmetrize() {
        for (index_t i = 0; i < n_; ++i) {
            (*this)(i, i) = std::real((*this)(i, i));
            for (index_t j = i + 1; j < n_; ++j) {
                const cplx m = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
                (*this)(i, j) = m;
                (*this)(j, i) = std::conj(m);
            }
        }
    }

    double frobenius() const noexcept {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    cvector apply(const cvector& x) const {
        cvector y(n_);
        for (index_t i = 0; i < n_; ++i) {
            cplx s = 0.0;
            for (index_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    // x^H G x (real part; the imaginary part is rounding only)
    double quadratic_form(const cvector& x) const {
        const cvector y = apply(x);
        cplx s = 0.0;
        for (index_t i = 0; i < n_; ++i) s += std::conj(x[i]) * y[i];
        return s.real();
    }

private:
    index_t n_ = 0;
    cvector a_;
};

struct HermitianEigen {
    std::vector<double> values;      // ascending
    std::vector<cvector> vectors;    // vectors[k] belongs to values[k]
    index_t sweeps = 0;
};

// First entry of largest modulus made real and non-negative.
inline void normalize_phase(cvector& v) {
    index_t k = 0;
    double best = -1.0;
    for (index_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > best) {
            best = std::abs(v[i]);
            k = i;
        }
    if (best <= 0.0) return;
    const cplx ph = std::conj(v[k]) / best;
    for (auto& x : v) x *= ph;
    v[k] = best;
}

// Cyclic Jacobi for complex Hermitian matrices. Each 2x2 step first removes
// the phase of a_pq, then applies the real symmetric rotation.
inline HermitianEigen hermitian_eigen(const DenseHermitian& g, index_t max_sweeps = 60) {
    const index_t n = g.size();
    DenseHermitian a = g;
    a.symmetrize();
    std::vector<cvector> v(n, cvector(n));  // v[row][col]
    for (index_t i = 0; i < n; ++i) v[i][i] = 1.0;

    const double fro = a.frobenius();
    constexpr double rel = 1e-17;
    HermitianEigen out;
    for (index_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (index_t p = 0; p + 1 < n; ++p) {
            for (index_t q = p + 1; q < n; ++q) {
                const cplx b = a(p, q);
                const double ab = std::abs(b);
                if (ab == 0.0) continue;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                if (ab <= rel * std::sqrt(std::abs(app * aqq)) || ab <= 1e-300 * fro) continue;
                rotated = true;
                const cplx e = b / ab;  // e^{i phi}
                const double theta = (aqq - app) / (2.0 * ab);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // U = [[c, s], [-s conj(e), c conj(e)]]
                const cplx u10 = -s * std::conj(e), u11 = c * std::conj(e);
                for (index_t k = 0; k < n; ++k) {  // columns: A <- A U
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * c + akq * u10;
                    a(k, q) = akp * s + akq * u11;
                }
                for (index_t k = 0; k < n; ++k) {  // rows: A <- U^H A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(u10) * aqk;
                    a(q, k) = s * apk + std::conj(u11) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (index_t k = 0; k < n; ++k) {
                    const cplx vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = vkp * c + vkq * u10;
                    v[k][q] = vkp * s + vkq * u11;
                }
            }
        }
        out.sweeps = sweep + 1;
        if (!rotated) break;
    }
    std::vector<index_t> order(n);
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](index_t i, index_t j) { return a(i, i).real() < a(j, j).real(); });
    for (index_t k : order) {
        out.values.push_back(a(k, k).real());
        cvector col(n);
        for (index_t i = 0; i < n; ++i) col[i] = v[i][k];
        normalize_phase(col);
        out.vectors.push_back(std::move(col));
    }
    return out;
}

struct SmallestEigpair {
    double value = 0.0;
    cvector vector;
    double gap = std::numeric_limits<double>::infinity();  // +inf for 1x1
};

inline SmallestEigpair hermitian_smallest_eigpair(const DenseHermitian& g) {
    if (g.size() == 0) throw ArgumentError("hermitian_smallest_eigpair: empty matrix");
    auto eig = hermitian_eigen(g);
    SmallestEigpair out;
    out.value = eig.values[0];
    out.vector = std::move(eig.vectors[0]);
    if (eig.values.size() > 1) out.gap = eig.values[1] - eig.values[0];
    return out;
}

}  // namespace pademor::linalg
