#include "nikodym/error.hpp"
#include "nikodym/experiments.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nikodym;

namespace {

GeomPtr geom(std::uint64_t p, unsigned m, unsigned d) { return Geometry::make(build_field(p, m), d); }

DirIndex dir_of(const GeomPtr& g, std::vector<Elem> v) { return g->canonical_direction(v).ordinal; }

} // namespace

TEST(Derangement, Densities)
{
    EXPECT_DOUBLE_EQ(derangement_density(0), 1.0);
    EXPECT_DOUBLE_EQ(derangement_density(1), 0.0);
    EXPECT_DOUBLE_EQ(derangement_density(2), 0.5);
    EXPECT_NEAR(derangement_density(3), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(derangement_density(4), 0.375, 1e-15);
}

TEST(Derangement, ExactFractionsAtQ101)
{
    EXPECT_NEAR(rootless_monic_fraction(101, 2), 5050.0 / 10201.0, 1e-12);
    EXPECT_NEAR(rootless_monic_fraction(101, 2), 0.49505, 1e-5);
    EXPECT_NEAR(rootless_monic_fraction(101, 3), 1.0 - 1.0 + 5050.0 / 10201.0 - 166650.0 / 1030301.0, 1e-12);
    EXPECT_NEAR(rootless_monic_fraction(101, 3), 0.33329, 2e-5); // quoted value is truncated
    for (unsigned D : {2u, 3u, 4u})
        EXPECT_LE(std::abs(rootless_monic_fraction(101, D) - derangement_density(D)), 0.006);
}

TEST(Derangement, ExactFractionMatchesEnumerationAtQ5)
{
    for (unsigned D : {2u, 3u, 4u}) {
        std::uint64_t rootless = 0, total = 0;
        for (const auto& f : oracle::monic_of_degree(5, D)) {
            bool root = false;
            for (std::int64_t x = 0; x < 5 && !root; ++x) {
                std::int64_t v = 0;
                for (std::size_t i = f.size(); i-- > 0;)
                    v = (v * x + f[i]) % 5;
                root = v == 0;
            }
            rootless += !root;
            ++total;
        }
        EXPECT_NEAR(rootless_monic_fraction(5, D), static_cast<double>(rootless) / static_cast<double>(total), 1e-12)
            << "D=" << D;
    }
}

TEST(Derangement, MonteCarlo)
{
    auto f = build_field(101, 1);
    for (unsigned D : {2u, 3u, 4u}) {
        const auto s = derangement_experiment(*f, D, 20000, 3);
        EXPECT_EQ(s.trials, 20000u);
        EXPECT_NEAR(s.rootless_fraction, s.exact_fraction, 0.015);
        EXPECT_DOUBLE_EQ(s.delta_D, derangement_density(D));
    }
    EXPECT_EQ(derangement_experiment(*f, 3, 1000, 9).rootless, derangement_experiment(*f, 3, 1000, 9).rootless);
    EXPECT_THROW(derangement_experiment(*build_field(3, 1), 3, 10, 0), Error);
}

TEST(Moments, ExactValues)
{
    auto g = geom(11, 1, 3);
    const auto s = moments_experiment(g, 3, 10, MomentMode::Unconstrained, 0);
    EXPECT_NEAR(s.exact_mean, 16625.0 / 1331.0, 1e-12);
    const double rk = std::pow(5.0 / 11.0, 3);
    EXPECT_NEAR(s.exact_variance, 133 * rk * (1 - rk), 1e-9);
    EXPECT_EQ(s.sizes.size(), 10u);

    const auto z = moments_experiment(g, 0, 5, MomentMode::Unconstrained, 0);
    EXPECT_DOUBLE_EQ(z.exact_mean, 133.0);
    for (auto n : z.sizes)
        EXPECT_EQ(n, 133u);
}

TEST(Moments, SampleMeanWithinFourSigma)
{
    struct Case {
        std::uint64_t p;
        unsigned k;
    };
    for (auto [p, k] : {Case{11, 2}, Case{11, 3}, Case{19, 4}}) {
        auto g = geom(p, 1, 3);
        for (auto mode : {MomentMode::Unconstrained, MomentMode::ExcludePerfectSquares}) {
            const auto s = moments_experiment(g, k, 2000, mode, 17);
            EXPECT_LE(std::abs(s.sample_mean - s.exact_mean), 4 * std::sqrt(s.exact_variance / 2000))
                << "q=" << p << " k=" << k;
        }
    }
}

TEST(Pairwise, ExactUniformityAtQ3)
{
    auto g = geom(3, 1, 3);
    const std::pair<std::vector<Elem>, std::vector<Elem>> cases[] = {
        {{1, 0, 0}, {0, 1, 0}},
        {{1, 1, 0}, {1, 2, 0}},
        {{1, 1, 1}, {0, 0, 1}},
    };
    for (const auto& [a, b] : cases) {
        const auto t = pairwise_independence_bruteforce(g, dir_of(g, a), dir_of(g, b));
        ASSERT_EQ(t.size(), 9u);
        for (auto n : t)
            EXPECT_EQ(n, 81u);
    }
    EXPECT_THROW(pairwise_independence_bruteforce(g, 0, 0), Error);
}

TEST(LangWeil, EnvelopeAndMean)
{
    auto g = geom(11, 1, 3);
    const auto s = lang_weil_experiment(g, 60, 2);
    EXPECT_EQ(s.sizes.size(), 60u);
    EXPECT_DOUBLE_EQ(s.center, 121.0);
    EXPECT_NEAR(s.envelope, 5 * std::pow(11.0, 1.5), 1e-9);
    EXPECT_EQ(s.outside_envelope, 0u);
    EXPECT_LE(s.min_size, s.max_size);

    auto g2 = geom(3, 2, 2);
    const auto s2 = lang_weil_experiment(g2, 40, 5);
    EXPECT_EQ(s2.outside_envelope, 0u);
    EXPECT_DOUBLE_EQ(s2.center, 9.0);
}

TEST(Irreducible, ExactAndSampled)
{
    const auto e = irreducible_fraction_exact(*build_field(3, 1), 2);
    EXPECT_EQ(e.trials, 729u);
    EXPECT_EQ(e.irreducible, 468u);
    const auto s = irreducible_fraction_experiment(geom(11, 1, 3), 2000, 1);
    EXPECT_GE(s.fraction, 0.95);
}
