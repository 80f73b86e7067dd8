#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"

using namespace pademor;
using namespace pademor::stochastic;
using testing_support::random_vector;

namespace {

const cplx I(0.0, 1.0);
const cplx z0(10.0, 0.5);

std::shared_ptr<maps::ModalOracle> square_oracle() {
    return maps::make_dirichlet_square_oracle(z0, std::sqrt(10.0), 1600, maps::xy_load_coefficient);
}

pade::PadeConfig config(index_t M, index_t N) { return pade::PadeConfig::with_defaults(M, N, z0, 7.0, 14.0); }

std::vector<double> values(const QoiValues& q) {
    std::vector<double> out;
    for (const auto& v : q) out.push_back(v.value());
    return out;
}

double median(std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST(Draw, SingleDrawIsReproducible) {
    RandomWavenumber rw{7.0, 14.0, 12345, {}};
    const auto a = rw.draw(1), b = rw.draw(1);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a, b);
    EXPECT_GE(a[0], 7.0);
    EXPECT_LE(a[0], 14.0);
}

TEST(Draw, UniformMean) {
    RandomWavenumber rw{7.0, 14.0, 20170301, {}};
    const auto d = rw.draw(100000);
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    EXPECT_NEAR(mean, 10.5, 0.03);
    EXPECT_TRUE(std::all_of(d.begin(), d.end(), [](double x) { return x >= 7.0 && x <= 14.0; }));
}

TEST(Draw, DegenerateIntervalRejected) {
    RandomWavenumber rw{7.0, 7.0, 1, {}};
    EXPECT_THROW(rw.draw(5), ArgumentError);
    RandomWavenumber ok{7.0, 8.0, 1, {}};
    EXPECT_THROW(ok.draw(0), ArgumentError);
}

TEST(Draw, PrefixStableAndSeedSensitive) {
    RandomWavenumber a{7.0, 14.0, 99, {}}, b{7.0, 14.0, 100, {}};
    const auto d10 = a.draw(10), d5 = a.draw(5);
    EXPECT_TRUE(std::equal(d5.begin(), d5.end(), d10.begin()));
    EXPECT_NE(a.draw(10), b.draw(10));
}

TEST(Qoi, ZeroMapGivesZeros) {
    const auto m = maps::make_spectral_oracle({8.0, 10.0}, cvector(2, 0.0), z0, 1.0);
    const auto d = RandomWavenumber{7.0, 14.0, 3, {}}.draw(50);
    for (double x : values(evaluate_qoi(d, *m, QuantityOfInterest::weighted_norm()))) EXPECT_EQ(x, 0.0);
}

TEST(Qoi, SinglePoleSurrogateIsExact) {
    const auto m = maps::make_spectral_oracle({9.0}, {cplx(1.0, 0.3)}, z0, std::sqrt(10.0));
    const auto a = pade::build_pade(*m, config(2, 1));
    const RandomWavenumber rw{7.0, 14.0, 5, {}};
    const auto s = make_sample_set(rw, 100, *m, a, QuantityOfInterest::weighted_norm());
    ASSERT_EQ(s.size(), 100u);
    for (index_t k = 0; k < s.size(); ++k) EXPECT_NEAR(s.xp[k], s.x[k], 1e-8 * s.x[k]);
}

TEST(Qoi, HigherDegreeHasSmallerMedianError) {
    const auto m = square_oracle();
    const RandomWavenumber rw{7.0, 14.0, 20170301, {}};
    const auto qoi = QuantityOfInterest::weighted_norm();
    std::vector<double> med;
    for (index_t M : {2u, 6u}) {
        const auto s = make_sample_set(rw, 2000, *m, pade::build_pade(*m, config(M, 3)), qoi);
        std::vector<double> rel;
        for (index_t k = 0; k < s.size(); ++k) rel.push_back(std::abs(s.x[k] - s.xp[k]) / s.x[k]);
        med.push_back(median(rel));
    }
    EXPECT_LT(med[1], med[0]);
}

TEST(Qoi, PoleSamplesExcludedOnBothSides) {
    const auto m = maps::make_spectral_oracle({8.0, 10.0, 13.0}, cvector(3, 1.0), z0, 1.0);
    const auto a = pade::build_pade(*m, config(10, 3));
    const auto roots = a.poles();
    std::vector<double> draws{7.5, 10.0, 10.0 + 5e-9, 12.0, 13.0 - 1e-7};
    const auto qoi = QuantityOfInterest::weighted_norm();
    const auto truth = evaluate_qoi(draws, *m, qoi);
    EXPECT_FALSE(truth[1].has_value());
    EXPECT_FALSE(truth[2].has_value());
    EXPECT_TRUE(truth[4].has_value());
    const auto s = pair_samples(draws, truth, evaluate_qoi(draws, a, qoi), 0);
    EXPECT_EQ(s.excluded_truth, 2u);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.requested, 5u);
}

TEST(Qoi, ThreadCountDoesNotChangeValues) {
    const auto m = square_oracle();
    const auto a = pade::build_pade(*m, config(4, 3));
    const auto d = RandomWavenumber{7.0, 14.0, 8, {}}.draw(500);
    const auto qoi = QuantityOfInterest::weighted_norm();
    EXPECT_EQ(values(evaluate_qoi(d, *m, qoi, {}, 1)), values(evaluate_qoi(d, *m, qoi, {}, 4)));
    EXPECT_EQ(values(evaluate_qoi(d, a, qoi, 1)), values(evaluate_qoi(d, a, qoi, 4)));
}

TEST(Qoi, WeightedNormIsOneLipschitz) {
    std::mt19937_64 rng(61);
    auto space = WeightedSpace::spectral(std::vector<double>{2.0, 5.0, 8.0, 10.0}, 1.7);
    const auto qoi = QuantityOfInterest::weighted_norm();
    EXPECT_EQ(qoi.lipschitz, 1.0);
    for (int k = 0; k < 100; ++k) {
        SpaceVector u(space, random_vector(rng, 4)), v(space, random_vector(rng, 4));
        EXPECT_LE(std::abs(qoi.fn(u) - qoi.fn(v)), norm(u - v) * (1.0 + 1e-14));
    }
}

TEST(CharacteristicFn, Examples) {
    std::vector<double> x{0.3, 1.7, -2.0, 5.5};
    EXPECT_EQ(characteristic_fn(x, 0.0), cplx(1.0));
    const std::vector<double> c(17, 2.5);
    EXPECT_LT(std::abs(characteristic_fn(c, 1.3) - std::exp(I * 1.3 * 2.5)), 1e-15);
    EXPECT_THROW(characteristic_fn(std::vector<double>{}, 1.0), ArgumentError);

    const index_t n = 100000;
    const stochastic::CounterRng rng(77);
    std::vector<double> u(n);
    for (index_t k = 0; k < n; ++k) u[k] = rng.uniform(k);
    const cplx exact = (std::exp(I) - 1.0) / I;
    EXPECT_LT(std::abs(characteristic_fn(u, 1.0) - exact), 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(CharacteristicFn, Invariants) {
    std::mt19937_64 rng(63);
    std::normal_distribution<double> g(3.0, 2.0);
    std::vector<double> x(3001);
    for (auto& v : x) v = g(rng);
    for (double t = -5.0; t <= 5.0; t += 0.25) {
        const cplx p = characteristic_fn(x, t);
        EXPECT_LE(std::abs(p), 1.0);
        EXPECT_EQ(characteristic_fn(x, -t), std::conj(p));
    }
}

TEST(ErrCurve, IdenticalSamplesAndSymmetry) {
    std::mt19937_64 rng(65);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    SampleSet s;
    for (int k = 0; k < 1000; ++k) {
        s.draws.push_back(u(rng));
        s.x.push_back(u(rng));
        s.xp.push_back(s.x.back() * (1.0 + 0.1 * u(rng)));
    }
    std::vector<double> t;
    for (int k = -20; k <= 20; ++k) t.push_back(0.25 * k);
    const auto e = err_curve(s, t);
    for (index_t k = 0; k < t.size(); ++k) {
        EXPECT_LE(e[k], 2.0);
        EXPECT_EQ(e[k], e[t.size() - 1 - k]);
    }
    EXPECT_EQ(e[20], 0.0);
    SampleSet same = s;
    same.xp = same.x;
    for (double v : err_curve(same, t)) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(err_curve(s, std::vector<double>{}), ArgumentError);
}

TEST(ErrCurve, PermutationInvariance) {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    SampleSet s;
    for (int k = 0; k < 5000; ++k) {
        s.draws.push_back(u(rng));
        s.x.push_back(u(rng));
        s.xp.push_back(u(rng));
    }
    std::vector<index_t> perm(s.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SampleSet p;
    for (index_t k : perm) {
        p.draws.push_back(s.draws[k]);
        p.x.push_back(s.x[k]);
        p.xp.push_back(s.xp[k]);
    }
    const std::vector<double> t{-4.0, -1.0, 0.5, 2.0, 5.0};
    const auto a = err_curve(s, t), b = err_curve(p, t);
    for (index_t k = 0; k < t.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-13);
}

TEST(FitRate, ExactModel) {
    const double rho = 4.0, r = 5.0;
    std::vector<double> ms, errs;
    for (int M = 2; M <= 10; M += 2) {
        ms.push_back(M);
        errs.push_back(std::pow(rho / r, (M + 1) / 4.0));
    }
    const auto f = fit_rate(ms, errs, rho, r);
    EXPECT_NEAR(f.slope, 0.25 * std::log(rho / r), 1e-12);
    EXPECT_NEAR(f.theoretical_slope, 0.25 * std::log(rho / r), 1e-15);
    EXPECT_TRUE(f.consistent);
    EXPECT_FALSE(f.unresolvable);
}

TEST(FitRate, ConstantErrors) {
    const std::vector<double> ms{2, 4, 6}, errs{0.1, 0.1, 0.1};
    const auto above = fit_rate(ms, errs, 4.0, 5.0, 0.01);
    EXPECT_NEAR(above.slope, 0.0, 1e-15);
    EXPECT_FALSE(above.consistent);  // slower than the bound
    const auto below = fit_rate(ms, errs, 4.0, 5.0, 0.2);
    EXPECT_TRUE(below.unresolvable);
    EXPECT_FALSE(below.consistent);
}

TEST(SampleSet, SeedDeterminism) {
    const auto m = square_oracle();
    const auto a = pade::build_pade(*m, config(4, 3));
    const auto qoi = QuantityOfInterest::weighted_norm();
    const RandomWavenumber rw{7.0, 14.0, 424242, {}};
    const auto s1 = make_sample_set(rw, 1000, *m, a, qoi, 1);
    const auto s2 = make_sample_set(rw, 1000, *m, a, qoi, 3);
    EXPECT_EQ(s1.draws, s2.draws);
    EXPECT_EQ(s1.x, s2.x);
    EXPECT_EQ(s1.xp, s2.xp);
    EXPECT_EQ(s1.seed, 424242u);
}

TEST(Rng, KnownSplitMixOutput) {
    // first outputs of SplitMix64 seeded with 0
    const CounterRng rng(0);
    EXPECT_EQ(rng.bits(0), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(rng.bits(1), 0x6E789E6AA1B965F4ULL);
}
