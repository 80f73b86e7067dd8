#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "support.hpp"

using namespace pademor;
using namespace pademor::linalg;
using testing_support::random_unit;
using testing_support::random_vector;
using testing_support::rel_diff;

namespace {

const cplx I(0.0, 1.0);

double residual(const SparseMatrix& a, const SparseMatrix& m, cplx shift, const cvector& x, const cvector& b) {
    const cvector ax = a * x, mx = m * x;
    cvector r(b.size());
    for (index_t i = 0; i < b.size(); ++i) r[i] = ax[i] - shift * mx[i] - b[i];
    return norm2(r) / norm2(b);
}

// Random diagonally dominant banded matrix, band = bw.
SparseMatrix random_banded(std::mt19937_64& rng, index_t n, index_t bw) {
    std::normal_distribution<double> g;
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) {
        t.push_back({i, i, cplx(4.0 + 2.0 * bw + g(rng), g(rng))});
        for (index_t k = 1; k <= bw; ++k)
            if (i + k < n) {
                t.push_back({i, i + k, cplx(g(rng), g(rng))});
                t.push_back({i + k, i, cplx(g(rng), g(rng))});
            }
    }
    return SparseMatrix::from_triplets(n, n, t);
}

DenseHermitian random_hermitian(std::mt19937_64& rng, index_t n) {
    std::normal_distribution<double> g;
    DenseHermitian h(n);
    for (index_t i = 0; i < n; ++i) {
        h(i, i) = g(rng);
        for (index_t j = i + 1; j < n; ++j) {
            h(i, j) = cplx(g(rng), g(rng));
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

}  // namespace

TEST(SparseMatrix, TripletsAreSortedAndSummed) {
    auto m = SparseMatrix::from_triplets(3, 3, {{2, 1, 1.0}, {0, 2, 2.0}, {0, 0, 1.0}, {2, 1, 3.0}});
    EXPECT_EQ(m.nnz(), 3u);
    EXPECT_EQ(m.at(2, 1), cplx(4.0));
    EXPECT_EQ(m.at(1, 1), cplx(0.0));
    for (index_t i = 0; i < m.rows(); ++i)
        for (index_t k = m.offsets()[i] + 1; k < m.offsets()[i + 1]; ++k) EXPECT_LT(m.columns()[k - 1], m.columns()[k]);
    EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), ArgumentError);
}

TEST(SolveShifted, IdentitySystem) {
    const auto id = SparseMatrix::identity(3);
    const cvector b{1.0, 2.0, 3.0};
    const auto x = solve_shifted(id, id, 0.0, b);
    EXPECT_LT(rel_diff(x, b), 1e-15);
}

TEST(SolveShifted, DiagonalShift) {
    const auto a = SparseMatrix::diagonal(std::vector<double>{8.0, 10.0, 13.0});
    const auto id = SparseMatrix::identity(3);
    const auto x = solve_shifted(a, id, cplx(10.0, 0.5), cvector{0.0, 1.0, 0.0});
    EXPECT_LT(rel_diff(x, cvector{0.0, 2.0 * I, 0.0}), 1e-14);
}

TEST(SolveShifted, FdSineEigenpair) {
    const auto f = testing_support::fd1d(9, pi);
    cvector s(9);
    for (index_t j = 0; j < 9; ++j) s[j] = std::sin(f.x[j]);
    const double lam = 4.0 / (f.h * f.h) * std::pow(std::sin(0.5 * f.h), 2);
    const auto x = solve_shifted(f.k, f.m, 0.0, f.m * s);
    cvector expect(9);
    for (index_t j = 0; j < 9; ++j) expect[j] = s[j] / lam;
    EXPECT_LT(rel_diff(x, expect), 1e-13);
}

TEST(SolveShifted, ErrorsCarryInformation) {
    const auto id = SparseMatrix::identity(3);
    EXPECT_THROW(solve_shifted(id, SparseMatrix::identity(2), 0.0, cvector(3, 1.0)), ArgumentError);
    EXPECT_THROW(solve_shifted(id, id, 0.0, cvector(2, 1.0)), ArgumentError);
    const auto a = SparseMatrix::diagonal(std::vector<double>{1.0, 2.0});
    try {
        solve_shifted(a, SparseMatrix::identity(2), 2.0, cvector{1.0, 1.0});
        FAIL() << "singular shift accepted";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.shift(), cplx(2.0));
    }
}

TEST(SolveShifted, ResidualPropertyBothSolvers) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const index_t n = 5 + trial * 3;
        const auto a = random_banded(rng, n, 1 + trial % 4);
        const auto m = SparseMatrix::identity(n);
        const auto b = random_vector(rng, n);
        const cplx shift(0.3 * trial, 0.5);
        for (auto kind : {SolverKind::banded, SolverKind::iterative}) {
            ShiftedSolver s(a, m, shift, 1e-12, kind);
            EXPECT_EQ(s.kind(), kind);
            EXPECT_LE(residual(a, m, shift, s.solve(b), b), 1e-12) << "trial " << trial;
        }
    }
}

TEST(Bicgstab, ConvergesOnNonBandedMatrix) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const index_t n = 60;
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) {
        t.push_back({i, i, cplx(10.0, 1.0)});
        t.push_back({i, (i * 17 + 5) % n, cplx(g(rng), g(rng))});
        t.push_back({(i * 29 + 11) % n, i, cplx(g(rng), g(rng))});
    }
    const auto a = SparseMatrix::from_triplets(n, n, t);
    const auto b = random_vector(rng, n);
    const auto r = bicgstab(a, b, 1e-12, 10 * n, {});
    EXPECT_TRUE(r.converged);
    EXPECT_LE(residual(a, SparseMatrix::identity(n), 0.0, r.x, b), 1e-12);
}

TEST(HermitianEigen, Identity) {
    DenseHermitian g(2, cvector{1.0, 0.0, 0.0, 1.0});
    const auto e = hermitian_smallest_eigpair(g);
    EXPECT_NEAR(e.value, 1.0, 1e-15);
    EXPECT_NEAR(norm2(e.vector), 1.0, 1e-15);
    EXPECT_NEAR(e.gap, 0.0, 1e-15);
}

TEST(HermitianEigen, DiagonalWithZero) {
    DenseHermitian g(2, cvector{2.0, 0.0, 0.0, 0.0});
    const auto e = hermitian_smallest_eigpair(g);
    EXPECT_NEAR(e.value, 0.0, 1e-15);
    EXPECT_LT(rel_diff(e.vector, cvector{0.0, 1.0}), 1e-15);
}

TEST(HermitianEigen, TwoByTwoComplex) {
    DenseHermitian g(2, cvector{2.0, I, -I, 2.0});
    const auto e = hermitian_smallest_eigpair(g);
    EXPECT_NEAR(e.value, 1.0, 1e-14);
    EXPECT_NEAR(e.gap, 2.0, 1e-14);
    // (-i, 1)/sqrt2 times i: first entry of largest modulus real and >= 0
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_LT(rel_diff(e.vector, cvector{s, s * I}), 1e-14);
}

TEST(HermitianEigen, RejectsNonHermitian) {
    EXPECT_THROW(DenseHermitian(2, cvector{1.0, 1.0, 0.0, 1.0}), ArgumentError);
}

TEST(HermitianEigen, InvariantsAgainstEigen) {
    std::mt19937_64 rng(11);
    for (index_t n = 1; n <= 10; ++n)
        for (int trial = 0; trial < 5; ++trial) {
            const auto g = random_hermitian(rng, n);
            const double fro = g.frobenius();
            const auto e = hermitian_smallest_eigpair(g);
            EXPECT_NEAR(norm2(e.vector), 1.0, 1e-14);
            cvector r = g.apply(e.vector);
            for (index_t i = 0; i < n; ++i) r[i] -= e.value * e.vector[i];
            EXPECT_LE(norm2(r), 1e-12 * fro);
            EXPECT_NEAR(g.quadratic_form(e.vector), e.value, 1e-12 * fro);
            for (int k = 0; k < 100; ++k) EXPECT_LE(e.value, g.quadratic_form(random_unit(rng, n)) + 1e-14 * fro);

            Eigen::MatrixXcd m(n, n);
            for (index_t i = 0; i < n; ++i)
                for (index_t j = 0; j < n; ++j) m(i, j) = g(i, j);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
            const auto full = hermitian_eigen(g);
            for (index_t k = 0; k < n; ++k) EXPECT_NEAR(full.values[k], es.eigenvalues()(k), 1e-12 * fro);

            // phase convention
            index_t big = 0;
            for (index_t i = 1; i < n; ++i)
                if (std::abs(e.vector[i]) > std::abs(e.vector[big])) big = i;
            EXPECT_EQ(e.vector[big].imag(), 0.0);
            EXPECT_GE(e.vector[big].real(), 0.0);
        }
}

TEST(PolyRoots, Linear) {
    const cplx z0(47.0, 0.5);
    const auto r = poly_roots({z0, cvector{0.0, 1.0}});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_LT(std::abs(r[0] - z0), 1e-13);
}

TEST(PolyRoots, Quadratic) {
    const auto r = poly_roots({0.0, cvector{2.0, -3.0, 1.0}});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_LT(std::abs(r[0] - 1.0), 1e-13);
    EXPECT_LT(std::abs(r[1] - 2.0), 1e-13);
}

TEST(PolyRoots, DegenerateRejected) {
    EXPECT_THROW(poly_roots({0.0, cvector{1.0}}), DegeneratePolynomialError);
    EXPECT_THROW(poly_roots({0.0, cvector{1.0, 1e-17}}), DegeneratePolynomialError);
}

TEST(PolyRoots, TrailingCoefficientsTrimmed) {
    const auto r = poly_roots({1.0, cvector{-1.0, 1.0, 1e-16}});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_LT(std::abs(r[0] - 2.0), 1e-13);
}

TEST(PolyRoots, PrescribedRootsDegreeFive) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const cplx z0(1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        cvector roots(5);
        for (auto& r : roots) r = cplx(u(rng), u(rng));
        const auto got = poly_roots(from_roots(roots, z0, cplx(0.3, -0.7)));
        ASSERT_EQ(got.size(), 5u);
        std::vector<bool> used(5, false);
        for (const auto& g : got) {
            index_t best = 0;
            double d = 1e300;
            for (index_t k = 0; k < 5; ++k)
                if (!used[k] && std::abs(g - roots[k]) < d) {
                    d = std::abs(g - roots[k]);
                    best = k;
                }
            used[best] = true;
            EXPECT_LT(d, 1e-8);
        }
    }
}

TEST(PolyRoots, ReexpansionSortingAndResidual) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (index_t deg = 1; deg <= 8; ++deg)
        for (int trial = 0; trial < 10; ++trial) {
            const cplx z0(g(rng), g(rng));
            ShiftedPolynomial q{z0, random_vector(rng, deg + 1)};
            const auto r = poly_roots(q);
            ASSERT_EQ(r.size(), deg);
            const auto back = from_roots(r, z0, q.coeffs.back());
            EXPECT_LT(rel_diff(back.coeffs, q.coeffs), 1e-8) << "degree " << deg;
            for (index_t k = 1; k < r.size(); ++k) EXPECT_LE(std::abs(r[k - 1] - z0), std::abs(r[k] - z0));
            for (const auto& root : r) {
                // scale: sum |q_a| max(1,|w|)^a
                const double w = std::max(1.0, std::abs(root - z0));
                double scale = 0.0;
                for (index_t a = 0; a <= deg; ++a) scale += std::abs(q.coeffs[a]) * std::pow(w, static_cast<double>(a));
                EXPECT_LE(std::abs(q(root)), 1e-10 * scale);
            }
        }
}

TEST(Cholesky, EuclideanCoordinatesPreserveTheNorm) {
    std::mt19937_64 rng(13);
    const auto f = testing_support::fd1d(40, 2.0);
    const auto w = SparseMatrix::combine(1.0, f.k, 3.0, f.m);
    BandedCholesky c(w);
    for (int k = 0; k < 20; ++k) {
        const auto u = random_vector(rng, 40);
        const auto y = c.apply_lh(u);
        const double direct = dot(u, w * u).real();
        EXPECT_NEAR(norm2(y) * norm2(y), direct, 1e-12 * direct);
    }
    EXPECT_THROW(BandedCholesky(SparseMatrix::diagonal(std::vector<double>{1.0, -1.0})), ArgumentError);
}

TEST(Svd, SmallestRightSingularVectorMatchesEigen) {
    std::mt19937_64 rng(17);
    for (index_t n = 1; n <= 7; ++n) {
        const index_t m = 3 * n + 2;
        std::vector<cvector> cols(n);
        for (auto& c : cols) c = random_vector(rng, m);
        Eigen::MatrixXcd a(m, n);
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i < m; ++i) a(i, j) = cols[j][i];
        const auto svd = right_singular(householder_r(cols));
        Eigen::JacobiSVD<Eigen::MatrixXcd> es(a, Eigen::ComputeThinV);
        const auto sv = es.singularValues();
        for (index_t k = 0; k < n; ++k) EXPECT_NEAR(svd.values[k], sv(n - 1 - k), 1e-12 * sv(0));
        // same direction up to phase
        cplx ip = 0.0;
        for (index_t i = 0; i < n; ++i) ip += std::conj(es.matrixV()(i, n - 1)) * svd.vectors[0][i];
        EXPECT_NEAR(std::abs(ip), 1.0, 1e-10);
    }
}

TEST(SubspaceEigen, NearestGeneralizedEigenvalues) {
    const auto f = testing_support::fd1d(63, pi);
    const auto got = nearest_generalized_eigenvalues(f.k, f.m, 10.0, 3);
    std::vector<double> exact;
    for (int j = 1; j <= 63; ++j) exact.push_back(4.0 / (f.h * f.h) * std::pow(std::sin(0.5 * j * f.h), 2));
    std::sort(exact.begin(), exact.end(), [](double a, double b) { return std::abs(a - 10.0) < std::abs(b - 10.0); });
    ASSERT_EQ(got.size(), 3u);
    std::vector<double> want(exact.begin(), exact.begin() + 3);
    auto sorted = got;
    std::sort(sorted.begin(), sorted.end());
    std::sort(want.begin(), want.end());
    for (index_t k = 0; k < 3; ++k) EXPECT_NEAR(sorted[k], want[k], 1e-9 * want[k]);
}
