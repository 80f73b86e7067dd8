#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <pademor/pademor.hpp>

namespace testing_support {

using pademor::cplx;
using pademor::cvector;
using pademor::index_t;

inline cvector random_vector(std::mt19937_64& rng, index_t n) {
    std::normal_distribution<double> g;
    cvector v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

inline cvector random_unit(std::mt19937_64& rng, index_t n) {
    auto v = random_vector(rng, n);
    const double s = pademor::linalg::norm2(v);
    for (auto& x : v) x /= s;
    return v;
}

inline double rel_diff(const cvector& a, const cvector& b) {
    double num = 0.0, den = 0.0;
    for (index_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline double rel_diff(const pademor::SpaceVector& a, const pademor::SpaceVector& b) {
    const double nb = pademor::norm(b);
    const double d = pademor::norm(a - b);
    return nb == 0.0 ? d : d / nb;
}

// 1D Dirichlet FD on (0, L): stiffness (1/h) tridiag(-1,2,-1), lumped mass h.
struct Fd1d {
    pademor::SparseMatrix k, m;
    std::vector<double> x;
    double h;
};

inline Fd1d fd1d(index_t interior, double length) {
    Fd1d f;
    f.h = length / static_cast<double>(interior + 1);
    std::vector<pademor::linalg::Triplet> kt, mt;
    for (index_t i = 0; i < interior; ++i) {
        kt.push_back({i, i, 2.0 / f.h});
        if (i > 0) kt.push_back({i, i - 1, -1.0 / f.h});
        if (i + 1 < interior) kt.push_back({i, i + 1, -1.0 / f.h});
        mt.push_back({i, i, f.h});
        f.x.push_back(f.h * static_cast<double>(i + 1));
    }
    f.k = pademor::SparseMatrix::from_triplets(interior, interior, kt);
    f.m = pademor::SparseMatrix::from_triplets(interior, interior, mt);
    return f;
}

}  // namespace testing_support
