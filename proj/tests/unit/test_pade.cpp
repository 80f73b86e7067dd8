#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "support.hpp"

using namespace pademor;
using namespace pademor::pade;
using linalg::ShiftedPolynomial;
using testing_support::random_unit;
using testing_support::random_vector;
using testing_support::rel_diff;

namespace {

const cplx I(0.0, 1.0);
const cplx z0_three(10.0, 0.5);
const double eps = std::numeric_limits<double>::epsilon();

std::shared_ptr<maps::ModalOracle> three_poles() {
    return maps::make_spectral_oracle({8.0, 10.0, 13.0}, cvector(3, 1.0), z0_three, std::sqrt(10.0));
}

PadeConfig cfg_of(index_t M, index_t N, index_t E, double rho, cplx z0,
                  DenominatorMethod method = DenominatorMethod::taylor_qr) {
    PadeConfig c;
    c.M = M;
    c.N = N;
    c.E = E;
    c.rho = rho;
    c.z0 = z0;
    c.method = method;
    return c;
}

// Taylor coefficients of Q S beyond the numerator, squared and weighted.
double jbar_via_gramian(const DenseHermitian& g, const cvector& q) { return std::sqrt(std::max(0.0, g.quadratic_form(q))); }

double closest(const cvector& roots, double target) {
    double d = 1e300;
    for (const auto& r : roots) d = std::min(d, std::abs(r - target));
    return d;
}

}  // namespace

TEST(Gramian, SingleEntryForNZero) {
    const auto m = three_poles();
    const auto t = TaylorTable::from_map(*m, 6);
    const auto cfg = cfg_of(3, 0, 6, 2.5, z0_three);
    const auto g = build_gramian(t, cfg);
    ASSERT_EQ(g.size(), 1u);
    double s = 0.0;
    for (index_t a = 4; a <= 6; ++a) s += std::pow(norm(t[a]), 2) * std::pow(2.5, 2.0 * a);
    EXPECT_NEAR(g(0, 0).real(), s, 1e-14 * s);
}

TEST(Gramian, ZeroCoefficientsGiveZeroMatrix) {
    auto space = WeightedSpace::spectral(std::vector<double>{1.0, 2.0}, 1.0);
    std::vector<SpaceVector> c(8, SpaceVector(space));
    c[0][0] = 1.0;  // below the window M + 1 - N
    const TaylorTable t(c, cplx(1.5, 0.5));
    const auto g = build_gramian(t, cfg_of(4, 2, 7, 1.3, cplx(1.5, 0.5)));
    EXPECT_EQ(g.frobenius(), 0.0);
}

TEST(Gramian, SinglePoleClosedForm) {
    const double lam = 8.0, w = 1.3, rho = 2.0;
    const cplx z0(7.0, 0.5), c = lam - z0;
    const auto m = maps::make_spectral_oracle({lam}, {1.0}, z0, w);
    const index_t M = 1, N = 3, E = 6;
    const auto g = build_gramian(TaylorTable::from_map(*m, E), cfg_of(M, N, E, rho, z0));
    const double phi2 = lam + w * w;
    for (index_t i = 0; i <= N; ++i)
        for (index_t j = 0; j <= N; ++j) {
            cplx s = 0.0;
            for (index_t a = M + 1; a <= E; ++a) {
                if (a < i || a < j) continue;
                s += std::pow(rho, 2.0 * a) * std::pow(c, -static_cast<double>(a - j + 1)) *
                     std::pow(std::conj(c), -static_cast<double>(a - i + 1)) * phi2;
            }
            EXPECT_LT(std::abs(g(i, j) - s), 1e-13 * std::abs(s) + 1e-300) << i << "," << j;
        }
}

TEST(Gramian, RejectsEmptySumAndBadConfig) {
    const auto m = three_poles();
    const auto t = TaylorTable::from_map(*m, 5);
    EXPECT_THROW(build_gramian(t, cfg_of(5, 0, 5, 1.0, z0_three)), ArgumentError);
    EXPECT_THROW(build_gramian(t, cfg_of(4, 2, 5, 1.0, z0_three)), ArgumentError);  // E < M + N
    EXPECT_THROW(build_gramian(t, cfg_of(4, 2, 7, 1.0, z0_three)), ArgumentError);  // table too short
    EXPECT_THROW(build_gramian(t, cfg_of(2, 2, 4, -1.0, z0_three)), ArgumentError);
    EXPECT_THROW(build_gramian(t, cfg_of(2, 2, 4, 1.0, cplx(9.0, 0.5))), ArgumentError);
}

TEST(Denominator, SinglePoleRootIsExact) {
    const double lam = 8.0;
    const cplx z0(10.0, 0.5);
    const auto m = maps::make_spectral_oracle({lam}, {1.0}, z0, std::sqrt(10.0));
    for (index_t M = 1; M <= 8; ++M) {
        const auto t = TaylorTable::from_map(*m, M + 1);
        const auto cfg = cfg_of(M, 1, M + 1, 3.0, z0);
        // Gramian route, as described
        const auto g = build_gramian(t, cfg);
        const auto den = compute_denominator(g, z0);
        EXPECT_LE(std::abs(den.q(lam)), 1e-12);
        // an eigensolve of G cannot resolve below eps * ||G||
        EXPECT_LE(den.diagnostics.smallest_eigenvalue, 64 * eps * g.frobenius());
        // the QR route works with sigma, so sigma^2 gets far below that
        const auto qr = compute_denominator_qr(t, cfg);
        EXPECT_LE(std::abs(qr.q(lam)), 1e-12);
        EXPECT_LE(qr.diagnostics.smallest_eigenvalue, 1e-20);
        const double j = jbar(t, qr.q, cfg);
        EXPECT_LE(j * j, 1e-20 * g.frobenius());
    }
}

TEST(Denominator, IdentityGramianIsAcceptedWithZeroGap) {
    DenseHermitian g(3, cvector{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0});
    const auto d = compute_denominator(g, cplx(1.0, 1.0));
    EXPECT_NEAR(linalg::norm2(d.q.coeffs), 1.0, 1e-15);
    EXPECT_EQ(d.diagnostics.spectral_gap, 0.0);
    EXPECT_TRUE(d.diagnostics.degenerate);
}

TEST(Denominator, GramianRouteRecoversPolesAtLowDegree) {
    const auto m = three_poles();
    const auto cfg = cfg_of(2, 3, 5, 3.5, z0_three, DenominatorMethod::gramian);
    const auto d = compute_denominator(build_gramian(TaylorTable::from_map(*m, 5), cfg), z0_three);
    const auto r = linalg::poly_roots(d.q);
    for (double p : {8.0, 10.0, 13.0}) EXPECT_LE(closest(r, p), 1e-6) << "pole " << p;
}

// Forming the Gramian squares the conditioning: past a few M its smallest
// eigenvalue drowns in rounding and the roots drift, the QR route does not.
TEST(Denominator, GramianRouteDegradesWhereQrRouteHolds) {
    const auto m = three_poles();
    const auto t = TaylorTable::from_map(*m, 13);
    const auto g = compute_denominator(build_gramian(t, cfg_of(10, 3, 13, 3.5, z0_three)), z0_three);
    const auto q = compute_denominator_qr(t, cfg_of(10, 3, 13, 3.5, z0_three));
    double worst_g = 0.0, worst_q = 0.0;
    for (double p : {8.0, 10.0, 13.0}) {
        worst_g = std::max(worst_g, closest(linalg::poly_roots(g.q), p));
        worst_q = std::max(worst_q, closest(linalg::poly_roots(q.q), p));
    }
    EXPECT_LE(worst_q, 1e-6);
    EXPECT_GT(worst_g, 1e3 * worst_q);
    EXPECT_LT(g.diagnostics.relative_gap(), 1e-12);
}

TEST(Denominator, ThreePolesRecoveredQrRoute) {
    const auto m = three_poles();
    const auto cfg = cfg_of(10, 3, 13, 3.5, z0_three);
    const auto d = compute_denominator_qr(TaylorTable::from_map(*m, 13), cfg);
    const auto r = linalg::poly_roots(d.q);
    for (double p : {8.0, 10.0, 13.0}) EXPECT_LE(closest(r, p), 1e-6) << "pole " << p;
}

TEST(Denominator, RoutesAgreeWhenWellConditioned) {
    std::mt19937_64 rng(31);
    const auto m = three_poles();
    for (index_t M = 0; M <= 4; ++M)
        for (index_t N = 1; N <= 3; ++N) {
            const auto t = TaylorTable::from_map(*m, M + N + 1);
            const auto a = compute_denominator_qr(t, cfg_of(M, N, M + N + 1, 1.0, z0_three));
            const auto g = build_gramian(t, cfg_of(M, N, M + N + 1, 1.0, z0_three));
            const auto b = compute_denominator(g, z0_three);
            cplx ip = linalg::dot(a.q.coeffs, b.q.coeffs);
            if (b.diagnostics.relative_gap() > 1e-6) EXPECT_NEAR(std::abs(ip), 1.0, 1e-8) << M << "," << N;
            EXPECT_NEAR(a.diagnostics.smallest_eigenvalue, b.diagnostics.smallest_eigenvalue, 1e-10 * g.frobenius());
            EXPECT_NEAR(a.diagnostics.gramian_norm, g.frobenius(), 1e-10 * g.frobenius());
        }
}

TEST(Denominator, UnitNormAndPhase) {
    const auto m = three_poles();
    for (auto method : {DenominatorMethod::taylor_qr, DenominatorMethod::gramian})
        for (index_t M = 1; M <= 10; ++M) {
            const auto a = build_pade(*m, cfg_of(M, 3, M + 3, 4.0, z0_three, method));
            const auto& q = a.denominator().coeffs;
            EXPECT_NEAR(linalg::norm2(q), 1.0, 1e-12);
            index_t big = 0;
            for (index_t k = 1; k < q.size(); ++k)
                if (std::abs(q[k]) > std::abs(q[big])) big = k;
            EXPECT_EQ(q[big].imag(), 0.0);
            EXPECT_GE(q[big].real(), 0.0);
        }
}

TEST(Numerator, ConstantDenominatorGivesTaylorCoefficients) {
    const auto m = three_poles();
    const auto t = TaylorTable::from_map(*m, 8);
    const auto cfg = cfg_of(5, 2, 8, 1.0, z0_three);
    const auto p = compute_numerator(t, ShiftedPolynomial{z0_three, cvector{1.0, 0.0, 0.0}}, cfg);
    ASSERT_EQ(p.size(), 6u);
    for (index_t a = 0; a <= 5; ++a) EXPECT_EQ(p[a].values(), t[a].values());
}

TEST(Numerator, DegreeZero) {
    const auto m = three_poles();
    const auto t = TaylorTable::from_map(*m, 2);
    const cplx q0(0.6, 0.8);
    const auto p = compute_numerator(t, ShiftedPolynomial{z0_three, cvector{q0, 0.0}}, cfg_of(0, 1, 2, 1.0, z0_three));
    ASSERT_EQ(p.size(), 1u);
    EXPECT_LT(rel_diff(p[0], q0 * t[0]), 1e-16);
}

TEST(Numerator, SinglePoleCancellation) {
    const double lam = 8.0;
    const cplx z0(9.0, 0.5);
    const auto m = maps::make_spectral_oracle({lam}, {1.0}, z0, 3.0);
    const auto t = TaylorTable::from_map(*m, 9);
    const auto q = linalg::from_roots({lam}, z0);
    const auto p = compute_numerator(t, q, cfg_of(8, 1, 9, 1.0, z0));
    for (index_t a = 1; a <= 8; ++a) EXPECT_LE(norm(p[a]), 1e-12 * norm(t[0]));
    EXPECT_LE(jbar(t, q, cfg_of(8, 1, 9, 1.0, z0)), 1e-14);
}

TEST(Evaluate, TaylorReductionIsExact) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const auto m = three_poles();
    for (index_t M = 0; M <= 12; ++M) {
        const auto t = TaylorTable::from_map(*m, M);
        const auto a = build_pade(t, cfg_of(M, 0, M, 2.0, z0_three));
        for (int k = 0; k < 20; ++k) {
            const cplx z = z0_three + cplx(u(rng), u(rng));
            cvector acc = t[M].values();
            for (index_t b = M; b-- > 0;)
                for (index_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] * (z - z0_three) + t[b][i];
            EXPECT_EQ(a.evaluate(z).values(), acc);
        }
    }
}

TEST(Evaluate, AtCenterIsRatioOfLowestCoefficients) {
    const auto m = three_poles();
    const auto a = build_pade(*m, cfg_of(4, 2, 6, 3.0, z0_three));
    EXPECT_LT(rel_diff(a.evaluate(z0_three), a.numerator()[0] / a.denominator().coeffs[0]), 1e-15);
}

TEST(Evaluate, ThreePolesAtTwelve) {
    const auto m = three_poles();
    const auto cfg = PadeConfig::with_defaults(10, 3, z0_three, 7.0, 14.0);
    EXPECT_EQ(cfg.E, 13u);
    const auto a = build_pade(*m, cfg);
    EXPECT_LT(rel_diff(a.evaluate(12.0), m->evaluate(12.0)), 1e-4);
}

TEST(Evaluate, SurrogatePoleRaises) {
    const auto m = three_poles();
    const auto a = build_pade(*m, cfg_of(10, 3, 13, 4.0, z0_three));
    const auto r = a.poles();
    try {
        a.evaluate(r[0]);
        FAIL() << "evaluation at a root accepted";
    } catch (const PoleProximityError& e) {
        EXPECT_LE(e.q_abs(), 1e-13);
    }
}

TEST(Jbar, GramianIdentityAndZeros) {
    std::mt19937_64 rng(43);
    const auto m = three_poles();
    const auto t = TaylorTable::from_map(*m, 12);
    for (index_t N : {1u, 2u, 3u, 5u}) {
        const auto cfg = cfg_of(12 - N - 2, N, 12, 3.2, z0_three);
        const auto g = build_gramian(t, cfg);
        for (int k = 0; k < 50; ++k) {
            const auto q = random_unit(rng, N + 1);
            const double j = jbar(t, {z0_three, q}, cfg);
            EXPECT_NEAR(j * j, g.quadratic_form(q), 1e-10 * j * j);
        }
    }
    auto space = WeightedSpace::spectral(std::vector<double>{1.0, 2.0}, 1.0);
    const TaylorTable zero(std::vector<SpaceVector>(6, SpaceVector(space)), cplx(1.5, 0.5));
    EXPECT_EQ(jbar(zero, {cplx(1.5, 0.5), cvector{0.6, 0.8}}, cfg_of(3, 1, 5, 2.0, cplx(1.5, 0.5))), 0.0);
}

TEST(Jbar, OptimalDenominatorIsMinimal) {
    std::mt19937_64 rng(47);
    const auto m = three_poles();
    for (auto method : {DenominatorMethod::taylor_qr, DenominatorMethod::gramian})
        for (index_t M : {2u, 5u, 8u}) {
            const auto cfg = cfg_of(M, 3, M + 3, 4.0, z0_three, method);
            const auto t = TaylorTable::from_map(*m, cfg.E);
            const auto a = build_pade(t, cfg);
            const double best = jbar(t, a.denominator(), cfg);
            for (int k = 0; k < 100; ++k)
                EXPECT_LE(best, jbar(t, {z0_three, random_unit(rng, 4)}, cfg) * (1.0 + 1e-12));
            EXPECT_NEAR(best * best, a.diagnostics().smallest_eigenvalue, 1e-8 * a.diagnostics().gramian_norm);
        }
}

TEST(Pade, MatchingConditions) {
    const auto m = three_poles();
    const auto cfg = cfg_of(7, 3, 10, 4.0, z0_three);
    const auto t = TaylorTable::from_map(*m, 10);
    const auto a = build_pade(t, cfg);
    const auto& q = a.denominator().coeffs;
    for (index_t al = 0; al <= cfg.M; ++al) {
        SpaceVector qs(t.space());
        for (index_t n = 0; n <= std::min<index_t>(al, cfg.N); ++n) qs.axpy(q[n], t[al - n]);
        EXPECT_LE(norm(qs - a.numerator()[al]), 1e-12 * norm(t[al]));
    }
}

TEST(Pade, LoadScalingLeavesDenominatorUnchanged) {
    const auto m = three_poles();
    const auto cfg = cfg_of(6, 3, 9, 4.0, z0_three);
    const auto t = TaylorTable::from_map(*m, 9);
    const cplx c(-3.0, 7.5);
    const auto a = build_pade(t, cfg), b = build_pade(t.scaled(c), cfg);
    const auto ga = build_gramian(t, cfg), gb = build_gramian(t.scaled(c), cfg);
    for (index_t k = 0; k < ga.data().size(); ++k)
        EXPECT_LT(std::abs(gb.data()[k] - std::norm(c) * ga.data()[k]), 1e-12 * std::norm(c) * ga.frobenius());
    EXPECT_NEAR(std::abs(linalg::dot(a.denominator().coeffs, b.denominator().coeffs)), 1.0, 1e-10);
    const auto ra = a.poles(), rb = b.poles();
    ASSERT_EQ(ra.size(), rb.size());
    for (index_t k = 0; k < ra.size(); ++k) EXPECT_LT(std::abs(ra[k] - rb[k]), 1e-10 * std::abs(ra[k]));
}

TEST(Pade, PolesSortedByDistanceToCenter) {
    const auto m = maps::make_spectral_oracle({40, 41, 45, 50, 52, 53}, cvector(6, 1.0), cplx(47.0, 0.5), 7.0);
    const auto a = build_pade(*m, cfg_of(10, 6, 16, 8.0, cplx(47.0, 0.5)));
    const auto r = a.poles();
    for (index_t k = 1; k < r.size(); ++k) EXPECT_LE(std::abs(r[k - 1] - a.z0()), std::abs(r[k] - a.z0()));
    for (const auto& f : a.filtered_poles(39.0, 55.0)) {
        EXPECT_LE(std::abs(f.imag()), 1.0);
        EXPECT_LE(std::abs(f.real() - 47.0), 16.0);
    }
}

TEST(Pade, JsonRoundTripIsBitExact) {
    const auto m = three_poles();
    const auto a = build_pade(*m, cfg_of(6, 3, 9, 4.0, z0_three));
    const auto text = to_json(a).dump();
    const auto b = approximant_from_json(json::parse(text), m->space());
    EXPECT_EQ(b.M(), a.M());
    EXPECT_EQ(b.N(), a.N());
    EXPECT_EQ(b.denominator().coeffs, a.denominator().coeffs);
    EXPECT_EQ(b.diagnostics().spectrum, a.diagnostics().spectrum);
    for (double z : {7.0, 8.5, 11.25, 13.9}) EXPECT_EQ(b.evaluate(z).values(), a.evaluate(z).values());
    EXPECT_THROW(approximant_from_json(json::parse(text), WeightedSpace::spectral(std::vector<double>{1.0}, 1.0)),
                 ArgumentError);
}

TEST(HeuristicRate, Examples) {
    const cplx z0(10.0, 0.5);
    const std::vector<double> poles{13.0, 8.0, 10.0, 5.0};
    EXPECT_EQ(heuristic_rate(z0, z0, poles, 4, 3), 0.0);
    // fourth nearest pole is 5, at distance |z0 - 5|
    const cplx z = z0 + std::abs(z0 - 5.0) * cplx(0.0, 1.0);
    EXPECT_NEAR(heuristic_rate(z, z0, poles, 7, 3), 1.0, 1e-14);
    EXPECT_THROW(heuristic_rate(z0, z0, poles, 4, 4), ArgumentError);
}

TEST(HeuristicRate, TransmissionPoles) {
    maps::TransmissionSetup s;
    s.cells = 16;
    const cplx z0(7.5, 0.5);
    const auto m = maps::make_transmission_map(s, z0);
    auto poles = m->poles_near(8);
    std::sort(poles.begin(), poles.end(), [&](double a, double b) { return std::abs(a - z0) < std::abs(b - z0); });
    for (index_t N : {2u, 4u, 6u}) {
        const double expect = std::pow(std::abs(z0 - 8.0) / std::abs(z0 - poles[N]), 11.0);
        EXPECT_NEAR(heuristic_rate(8.0, z0, poles, 10, N), expect, 1e-14 * expect);
        EXPECT_LT(expect, 1.0);
    }
}
