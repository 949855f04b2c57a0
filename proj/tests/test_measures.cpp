#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "bconv/errors.hpp"
#include "bconv/measures.hpp"
#include "test_support.hpp"

using namespace bconv;

namespace {

double variance_along(const DiscreteMeasure& mu, std::size_t j) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        m1 += mu.weight(i) * mu.point(i)[j];
        m2 += mu.weight(i) * mu.point(i)[j] * mu.point(i)[j];
    }
    return m2 / mu.mass() - (m1 / mu.mass()) * (m1 / mu.mass());
}

} // namespace

TEST(FromAtoms, SingleAtom) {
    auto mu = DiscreteMeasure::from_atoms({{{0.0}, 1.0}});
    EXPECT_EQ(mu.size(), 1u);
    EXPECT_DOUBLE_EQ(mu.mass(), 1.0);
}

TEST(FromAtoms, ExactMerge) {
    auto mu = DiscreteMeasure::from_atoms({{{0.0}, 0.5}, {{0.0}, 0.5}});
    ASSERT_EQ(mu.size(), 1u);
    EXPECT_DOUBLE_EQ(mu.weight(0), 1.0);
}

TEST(FromAtoms, NoMergeOfDistinctPoints) {
    auto mu = DiscreteMeasure::from_atoms({{{0.5, 0.0}, 0.25}, {{1.5, 0.0}, 0.75}});
    EXPECT_EQ(mu.size(), 2u);
    EXPECT_DOUBLE_EQ(mu.mass(), 1.0);
}

TEST(FromAtoms, SignedZeroIsOnePoint) {
    auto mu = DiscreteMeasure::from_atoms({{{0.0}, 0.5}, {{-0.0}, 0.5}});
    EXPECT_EQ(mu.size(), 1u);
}

TEST(FromAtoms, ZeroWeightsDropped) {
    auto mu = DiscreteMeasure::from_atoms({{{0.0}, 0.0}, {{1.0}, 1.0}});
    ASSERT_EQ(mu.size(), 1u);
    EXPECT_EQ(mu.point(0)[0], 1.0);
}

TEST(FromAtoms, Errors) {
    EXPECT_THROW(DiscreteMeasure::from_atoms({{{0.0}, 1.0}, {{0.0, 1.0}, 1.0}}), InputError);
    EXPECT_THROW(DiscreteMeasure::from_atoms({{{0.0}, -1.0}}), InputError);
}

TEST(FromAtoms, FloatNearDuplicatesStayApartUnlessQuantized) {
    const double a = 0.1 + 0.2;
    const double b = 0.3;
    ASSERT_NE(a, b);
    EXPECT_EQ(DiscreteMeasure::from_atoms({{{a}, 0.5}, {{b}, 0.5}}).size(), 2u);
    EXPECT_EQ(DiscreteMeasure::from_atoms({{{a}, 0.5}, {{b}, 0.5}}, MergePolicy::Quantized).size(), 1u);
}

TEST(FromAtoms, CanonicalFormIndependentOfInputOrder) {
    std::mt19937_64 rng(7);
    std::vector<std::pair<Point, double>> atoms;
    std::uniform_int_distribution<int> c(0, 5);
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int i = 0; i < 200; ++i) atoms.push_back({{c(rng) * 0.1, c(rng) * 0.3}, w(rng)});
    const auto ref = DiscreteMeasure::from_atoms(atoms);
    for (int rep = 0; rep < 5; ++rep) {
        std::shuffle(atoms.begin(), atoms.end(), rng);
        EXPECT_EQ(DiscreteMeasure::from_atoms(atoms), ref);
        EXPECT_EQ(DiscreteMeasure::from_atoms(atoms).mass(), ref.mass());
    }
}

TEST(Convolve, IdentityElement) {
    std::mt19937_64 rng(1);
    auto mu = fixtures::random_measure(rng, 2, 7);
    EXPECT_EQ(convolve(DiscreteMeasure::dirac({0.0, 0.0}), mu), mu);
}

TEST(Convolve, BernoulliSquare) {
    auto half = DiscreteMeasure::from_atoms({{{0.0}, 0.5}, {{1.0}, 0.5}});
    auto sq = convolve(half, half);
    ASSERT_EQ(sq.size(), 3u);
    EXPECT_EQ(sq.point(0)[0], 0.0);
    EXPECT_EQ(sq.point(1)[0], 1.0);
    EXPECT_EQ(sq.point(2)[0], 2.0);
    EXPECT_DOUBLE_EQ(sq.weight(0), 0.25);
    EXPECT_DOUBLE_EQ(sq.weight(1), 0.5);
    EXPECT_DOUBLE_EQ(sq.weight(2), 0.25);
}

TEST(Convolve, PointMassTranslates) {
    auto half = DiscreteMeasure::from_atoms({{{0.0}, 0.5}, {{1.0}, 0.5}});
    auto out = convolve(half, DiscreteMeasure::dirac({3.0}));
    EXPECT_EQ(out, DiscreteMeasure::from_atoms({{{3.0}, 0.5}, {{4.0}, 0.5}}));
}

TEST(Convolve, DimensionMismatch) {
    EXPECT_THROW((void)convolve(DiscreteMeasure::dirac({0.0}), DiscreteMeasure::dirac({0.0, 0.0})),
                 InputError);
}

TEST(Convolve, CommutesAndMassMultiplies) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const std::size_t d = 1 + t % 3;
        auto mu = fixtures::random_measure_real(rng, d, 5).scaled(0.7);
        auto nu = fixtures::random_measure_real(rng, d, 4).scaled(0.4);
        const auto a = convolve(mu, nu);
        EXPECT_EQ(a, convolve(nu, mu));
        EXPECT_NEAR(a.mass(), mu.mass() * nu.mass(), 1e-12);
    }
}

TEST(Convolve, AssociatesOnGridFixtures) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
        auto a = fixtures::random_measure(rng, 2, 4);
        auto b = fixtures::random_measure(rng, 2, 3);
        auto c = fixtures::random_measure(rng, 2, 3);
        EXPECT_TRUE(fixtures::atoms_close(convolve(convolve(a, b), c), convolve(a, convolve(b, c)), 1e-15));
    }
}

TEST(Pushforward, Scale) {
    auto out = pushforward(DiscreteMeasure::dirac({1.0, 1.0}), ScaleVector({2.0, 2.0}));
    EXPECT_EQ(out, DiscreteMeasure::dirac({2.0, 2.0}));
}

TEST(Pushforward, ProjectDropsSecondCoordinate) {
    auto mu = DiscreteMeasure::from_atoms({{{0.0, 5.0}, 0.5}, {{1.0, 5.0}, 0.5}});
    auto out = pushforward(mu, Projection{{0}});
    EXPECT_EQ(out, DiscreteMeasure::from_atoms({{{0.0}, 0.5}, {{1.0}, 0.5}}));
}

TEST(Pushforward, TranslateThenScale) {
    auto out = pushforward(pushforward(DiscreteMeasure::dirac({1.0}), Translation{{1.0}}),
                           ScaleVector({0.5}));
    EXPECT_EQ(out, DiscreteMeasure::dirac({1.0}));
}

TEST(Pushforward, EmptyProjectionGivesPointOfR0) {
    auto mu = DiscreteMeasure::from_atoms({{{0.0}, 0.25}, {{1.0}, 0.5}});
    auto out = pushforward(mu, Projection{{}});
    EXPECT_EQ(out.dim(), 0u);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_DOUBLE_EQ(out.mass(), 0.75);
}

TEST(Pushforward, ProjectionOrderAndRange) {
    auto mu = DiscreteMeasure::dirac({1.0, 2.0, 3.0});
    EXPECT_EQ(pushforward(mu, Projection{{2, 0}}), DiscreteMeasure::dirac({1.0, 3.0}));
    EXPECT_THROW((void)pushforward(mu, Projection{{3}}), InputError);
}

TEST(Pushforward, ScaleGroupAction) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        auto mu = fixtures::random_measure_real(rng, 3, 6);
        auto r = fixtures::random_scale(rng, 3, 0.1, 3.0);
        auto rp = fixtures::random_scale(rng, 3, 0.1, 3.0);
        auto two_step = pushforward(pushforward(mu, rp), r);
        auto one_step = pushforward(mu, r * rp);
        EXPECT_TRUE(fixtures::atoms_close(two_step, one_step, 1e-12));
        EXPECT_NEAR(two_step.mass(), mu.mass(), 1e-15);
    }
}

TEST(BernoulliPower, RowsOfPascal) {
    auto k1 = bernoulli_power({0.0}, {1.0}, 1);
    EXPECT_EQ(k1, DiscreteMeasure::from_atoms({{{0.0}, 0.5}, {{1.0}, 0.5}}));
    auto k2 = bernoulli_power({0.0}, {1.0}, 2);
    ASSERT_EQ(k2.size(), 3u);
    EXPECT_NEAR(k2.weight(0), 0.25, 1e-15);
    EXPECT_NEAR(k2.weight(1), 0.5, 1e-15);
    EXPECT_NEAR(k2.weight(2), 0.25, 1e-15);
    auto k4 = bernoulli_power({0.0, 0.0}, {1.0, 0.0}, 4);
    ASSERT_EQ(k4.size(), 5u);
    const double row[] = {1, 4, 6, 4, 1};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(k4.point(i)[0], static_cast<double>(i));
        EXPECT_EQ(k4.point(i)[1], 0.0);
        EXPECT_NEAR(k4.weight(i), row[i] / 16.0, 1e-15);
    }
}

TEST(BernoulliPower, MatchesRepeatedConvolution) {
    auto zeta = DiscreteMeasure::from_atoms({{{0.25, -1.0}, 0.5}, {{1.0, 0.5}, 0.5}});
    auto acc = zeta;
    for (std::size_t k = 2; k <= 12; ++k) {
        acc = convolve(acc, zeta);
        EXPECT_TRUE(fixtures::atoms_close(bernoulli_power({0.25, -1.0}, {1.0, 0.5}, k), acc, 1e-12));
    }
}

TEST(BernoulliPower, VarianceIsAdditive) {
    const Point x{0.3, -1.2, 2.0};
    const Point y{1.1, 0.4, 2.0};
    auto one = bernoulli_power(x, y, 1);
    for (std::size_t k : {2u, 7u, 64u, 1000u}) {
        auto pk = bernoulli_power(x, y, k);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_NEAR(variance_along(pk, j), static_cast<double>(k) * variance_along(one, j),
                        1e-9 * static_cast<double>(k));
        }
        EXPECT_NEAR(pk.mass(), 1.0, 1e-12);
    }
}

TEST(BernoulliPower, Errors) {
    EXPECT_THROW((void)bernoulli_power({0.0}, {1.0}, 0), InputError);
    EXPECT_THROW((void)bernoulli_power({1.0}, {1.0}, 3), InputError);
}

TEST(MeasureCsv, RoundTripsBitExactly) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        auto mu = fixtures::random_measure_real(rng, 1 + t % 3, 9).scaled(0.37);
        std::stringstream ss;
        write_measure_csv(ss, mu);
        EXPECT_EQ(read_measure_csv(ss), mu);
    }
}

TEST(MeasureCsv, RejectsMalformedInput) {
    std::stringstream bad_header("a,b\n1,2\n");
    EXPECT_THROW((void)read_measure_csv(bad_header), InputError);
    std::stringstream bad_row("x1,w\n1,2,3\n");
    EXPECT_THROW((void)read_measure_csv(bad_row), InputError);
    std::stringstream neg("x1,w\n1,-2\n");
    EXPECT_THROW((void)read_measure_csv(neg), InputError);
    std::stringstream ok("x1,x2,w\n0,1,0.25\n2,3,0.5\n");
    auto mu = read_measure_csv(ok);
    EXPECT_EQ(mu.dim(), 2u);
    EXPECT_DOUBLE_EQ(mu.mass(), 0.75);
}
