#include "nikodym/error.hpp"
#include "nikodym/quadrics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

using namespace nikodym;

namespace {

GeomPtr geom(std::uint64_t p, unsigned m, unsigned d) { return Geometry::make(build_field(p, m), d); }

// Q = x² + y² + z² + 1
InhomQuadratic sum_of_squares_plus_one()
{
    InhomQuadratic q = InhomQuadratic::zero(3);
    q.quad[pair_slot(0, 0, 3)] = 1;
    q.quad[pair_slot(1, 1, 3)] = 1;
    q.quad[pair_slot(2, 2, 3)] = 1;
    q.cst = 1;
    return q;
}

InhomQuadratic decode(std::uint64_t code, unsigned d, std::uint32_t q)
{
    InhomQuadratic poly = InhomQuadratic::zero(d);
    for (auto& c : poly.quad) {
        c = static_cast<Elem>(code % q);
        code /= q;
    }
    for (auto& c : poly.lin) {
        c = static_cast<Elem>(code % q);
        code /= q;
    }
    poly.cst = static_cast<Elem>(code % q);
    return poly;
}

} // namespace

TEST(Quadrics, PairLayout)
{
    EXPECT_EQ(num_pairs(3), 6u);
    EXPECT_EQ(pair_slot(0, 0, 3), 0u);
    EXPECT_EQ(pair_slot(0, 2, 3), 2u);
    EXPECT_EQ(pair_slot(1, 1, 3), 3u);
    EXPECT_EQ(pair_slot(1, 2, 3), 4u);
    EXPECT_EQ(pair_slot(2, 2, 3), 5u);
    EXPECT_EQ(InhomQuadratic::zero(3).coefficient_count(), 10u);
}

TEST(Quadrics, EvalExamples)
{
    auto f = build_field(3, 1);
    const Elem x[] = {1, 1, 0};
    EXPECT_EQ(eval(*f, sum_of_squares_plus_one(), x), 0u);
    EXPECT_EQ(eval(*f, InhomQuadratic::zero(3), x), 0u);
    const auto h = discriminant(*f, sum_of_squares_plus_one());
    const Elem e1[] = {1, 0, 0};
    EXPECT_EQ(eval(*f, h, e1), 2u);
    const Elem bad[] = {1, 0};
    EXPECT_THROW(eval(*f, h, bad), Error);
}

TEST(Quadrics, IrreducibilityExamples)
{
    auto f = build_field(3, 1);
    EXPECT_TRUE(is_absolutely_irreducible(*f, sum_of_squares_plus_one()));
    EXPECT_EQ(matrix_rank(*f, augmented_matrix(*f, sum_of_squares_plus_one()), 4), 4u);
    // (x+1)(y+1) = xy + x + y + 1
    InhomQuadratic q = InhomQuadratic::zero(2);
    q.quad[pair_slot(0, 1, 2)] = 1;
    q.lin = {1, 1};
    q.cst = 1;
    EXPECT_FALSE(is_absolutely_irreducible(*f, q));
    // constants and linear polynomials are never absolutely irreducible quadrics
    InhomQuadratic lin = InhomQuadratic::zero(2);
    lin.lin = {1, 0};
    lin.cst = 1;
    EXPECT_FALSE(is_absolutely_irreducible(*f, lin));
    EXPECT_FALSE(is_absolutely_irreducible(*f, InhomQuadratic::zero(2)));
}

TEST(Quadrics, RankCriterionMatchesFactorizationOverF9)
{
    auto f = build_field(3, 1);
    const auto split = oracle::split_conics_over_f9();
    int irreducible = 0;
    for (std::uint64_t code = 0; code < 729; ++code) {
        const auto q = decode(code, 2, 3);
        const oracle::Conic c = {q.quad[0], q.quad[1], q.quad[2], q.lin[0], q.lin[1], q.cst};
        const bool expect = oracle::conic_absolutely_irreducible(c, split);
        ASSERT_EQ(is_absolutely_irreducible(*f, q), expect) << "code " << code;
        irreducible += expect;
    }
    EXPECT_EQ(irreducible, 468); // frozen oracle count
}

TEST(Quadrics, DiscriminantCriterionOnUnitConstantConics)
{
    auto f = build_field(3, 1);
    const auto split = oracle::split_conics_over_f9();
    int irreducible = 0;
    for (std::uint64_t code = 0; code < 243; ++code) {
        auto q = decode(code, 2, 3);
        q.cst = 1;
        const bool by_rank = is_absolutely_irreducible(*f, q);
        const bool by_disc = !is_perfect_square_abs(*f, discriminant(*f, q));
        const oracle::Conic c = {q.quad[0], q.quad[1], q.quad[2], q.lin[0], q.lin[1], 1};
        const bool by_oracle = oracle::conic_absolutely_irreducible(c, split);
        ASSERT_EQ(by_rank, by_disc) << code;
        ASSERT_EQ(by_rank, by_oracle) << code;
        irreducible += by_rank;
    }
    EXPECT_EQ(irreducible, 162); // frozen oracle count
}

TEST(Quadrics, DiscriminantExamples)
{
    auto f = build_field(3, 1);
    EXPECT_THROW(discriminant(*f, InhomQuadratic::zero(2)), Error);
    // quad = 0: discriminant is L²
    InhomQuadratic q = InhomQuadratic::zero(2);
    q.lin = {1, 2};
    q.cst = 1;
    const auto h = discriminant(*f, q);
    EXPECT_EQ(h.coeffs, (std::vector<Elem>{1, f->mul(2, 2), f->mul(2, 2)}));
    // Σ x_a² + 1: −4 Σ v_a²
    const auto h3 = discriminant(*f, sum_of_squares_plus_one());
    EXPECT_EQ(h3.coeffs, (std::vector<Elem>{2, 0, 0, 2, 0, 2}));
}

TEST(Quadrics, ProductOfAffineFactorsHasSquareDiscriminant)
{
    // (1 + A)(1 + B) has discriminant (A − B)².
    auto f = build_field(5, 1);
    CounterRng rng(5, 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Elem> a(3), b(3);
        for (auto& c : a)
            c = static_cast<Elem>(rng.uniform(5));
        for (auto& c : b)
            c = static_cast<Elem>(rng.uniform(5));
        InhomQuadratic q = InhomQuadratic::zero(3);
        for (unsigned i = 0; i < 3; ++i)
            for (unsigned j = i; j < 3; ++j)
                q.quad[pair_slot(i, j, 3)] =
                    i == j ? f->mul(a[i], b[i]) : f->add(f->mul(a[i], b[j]), f->mul(a[j], b[i]));
        for (unsigned i = 0; i < 3; ++i)
            q.lin[i] = f->add(a[i], b[i]);
        q.cst = 1;
        const auto h = discriminant(*f, q);
        for (unsigned i = 0; i < 3; ++i)
            for (unsigned j = i; j < 3; ++j) {
                const Elem di = f->sub(a[i], b[i]), dj = f->sub(a[j], b[j]);
                const Elem want = i == j ? f->mul(di, di) : f->mul(2, f->mul(di, dj));
                ASSERT_EQ(h.coeffs[pair_slot(i, j, 3)], want);
            }
        EXPECT_TRUE(is_perfect_square_abs(*f, h));
        EXPECT_FALSE(is_absolutely_irreducible(*f, q));
    }
}

TEST(Quadrics, PerfectSquareMatchesSearchOverF9)
{
    auto f = build_field(3, 1);
    HomQuadratic h = HomQuadratic::zero(2);
    for (Elem a = 0; a < 3; ++a)
        for (Elem b = 0; b < 3; ++b)
            for (Elem c = 0; c < 3; ++c) {
                h.coeffs = {a, b, c};
                ASSERT_EQ(is_perfect_square_abs(*f, h), oracle::form_is_square_over_f9(a, b, c)) << a << b << c;
            }
    h.coeffs = {1, 0, 0};
    EXPECT_TRUE(is_perfect_square_abs(*f, h));
    h.coeffs = {0, 1, 0};
    EXPECT_FALSE(is_perfect_square_abs(*f, h));
}

TEST(Quadrics, PerfectSquareFractionTernary)
{
    for (std::uint32_t q : {3u, 5u}) {
        auto f = build_field(q, 1);
        HomQuadratic h = HomQuadratic::zero(3);
        std::uint64_t total = 1;
        for (int i = 0; i < 6; ++i)
            total *= q;
        std::uint64_t squares = 0;
        for (std::uint64_t code = 0; code < total; ++code) {
            std::uint64_t rest = code;
            for (auto& c : h.coeffs) {
                c = static_cast<Elem>(rest % q);
                rest /= q;
            }
            squares += is_perfect_square_abs(*f, h);
        }
        // 0 and λ·L² for each of the q²+q+1 projective L and q−1 scalars
        EXPECT_EQ(squares, 1 + (q - 1) * (q * q + q + 1));
        EXPECT_LE(static_cast<double>(squares) / total, 2.0 / (q * q * q));
    }
}

TEST(Quadrics, ZeroLocus)
{
    auto g = geom(3, 1, 2);
    InhomQuadratic one = InhomQuadratic::zero(2);
    one.cst = 1;
    EXPECT_EQ(zero_locus(one, g).size(), 0u);
    InhomQuadratic q = InhomQuadratic::zero(2);
    q.quad[pair_slot(0, 0, 2)] = 1;
    q.quad[pair_slot(1, 1, 2)] = 1;
    q.cst = 1;
    const auto v = zero_locus(q, g);
    EXPECT_EQ(v.size(), 4u);
    for (PointIndex x = 0; x < g->num_points(); ++x)
        EXPECT_EQ(v.contains(x), eval(g->field(), q, g->coords(x)) == 0);
}

TEST(Quadrics, ZeroLocusLangWeilWindow)
{
    auto g = geom(11, 1, 3);
    CounterRng rng(17, streams::kExperiment);
    const double lo = 121 - 5 * std::pow(11.0, 1.5), hi = 121 + 5 * std::pow(11.0, 1.5);
    for (int i = 0; i < 50; ++i) {
        const auto s = sample_quadratic(g->field(), 3, rng, SampleMode::AbsIrreducible);
        const double n = static_cast<double>(zero_locus(s.poly, g).size());
        EXPECT_GE(n, lo);
        EXPECT_LE(n, hi);
    }
}

TEST(Quadrics, AvoidanceExamples)
{
    auto f = build_field(3, 1);
    const Elem e1[] = {1, 0, 0};
    const auto v1 = direction_avoids(*f, sum_of_squares_plus_one(), e1);
    EXPECT_TRUE(v1.avoids);
    EXPECT_EQ(v1.kind, AvoidCase::NoRealRoot);

    InhomQuadratic xy = InhomQuadratic::zero(2);
    xy.quad[pair_slot(0, 1, 2)] = 1;
    xy.cst = 1;
    const Elem x_axis[] = {1, 0};
    const auto v2 = direction_avoids(*f, xy, x_axis);
    EXPECT_TRUE(v2.avoids);
    EXPECT_EQ(v2.kind, AvoidCase::DegenerateConstant);
    // the literal non-residue test disagrees on this direction
    EXPECT_FALSE(f->is_nonresidue(eval(*f, discriminant(*f, xy), x_axis)));

    // x² + x + 1 = (x − 1)² over F_3: a double root, not avoiding
    InhomQuadratic sq = InhomQuadratic::zero(2);
    sq.quad[pair_slot(0, 0, 2)] = 1;
    sq.lin = {1, 0};
    sq.cst = 1;
    const auto v3 = direction_avoids(*f, sq, x_axis);
    EXPECT_FALSE(v3.avoids);
    EXPECT_EQ(v3.kind, AvoidCase::Tangent);

    InhomQuadratic through_origin = InhomQuadratic::zero(2);
    through_origin.lin = {1, 0};
    EXPECT_THROW(direction_avoids(*f, through_origin, x_axis), Error);
    EXPECT_STREQ(avoid_case_name(AvoidCase::NoRealRoot), "no-real-root");
}

TEST(Quadrics, AvoidanceMatchesRootEnumeration)
{
    for (std::uint32_t q : {3u, 5u}) {
        auto g = geom(q, 1, 2);
        const FieldCtx& f = g->field();
        std::uint64_t total = 1;
        for (int i = 0; i < 6; ++i)
            total *= q;
        for (std::uint64_t code = 0; code < total; ++code) {
            const auto poly = decode(code, 2, q);
            if (poly.cst == 0)
                continue;
            for (DirIndex o = 0; o < g->num_directions(); ++o) {
                bool root = false;
                for (PointIndex y : g->punctured_line(0, o))
                    root = root || eval(f, poly, g->coords(y)) == 0;
                const auto v = direction_avoids(f, poly, g->coords(g->direction_rep(o)));
                ASSERT_EQ(v.avoids, !root) << "q=" << q << " code=" << code << " dir=" << o;
                ASSERT_EQ(v.avoids, v.kind == AvoidCase::NoRealRoot || v.kind == AvoidCase::DegenerateConstant);
            }
        }
    }
}

TEST(Quadrics, StrictSetVersusGeometricAvoidance)
{
    auto g = geom(7, 1, 3);
    const FieldCtx& f = g->field();
    CounterRng rng(3, 9);
    for (int i = 0; i < 40; ++i) {
        const auto q = sample_quadratic(f, 3, rng, SampleMode::UnitConstant).poly;
        const auto strict = nonresidue_direction_set(discriminant(f, q), g);
        const auto geo = avoidance_direction_set(q, g);
        for (DirIndex o = 0; o < g->num_directions(); ++o) {
            const auto v = direction_avoids(f, q, g->coords(g->direction_rep(o)));
            if (strict.contains(o))
                EXPECT_TRUE(geo.contains(o));
            else if (geo.contains(o))
                EXPECT_EQ(v.kind, AvoidCase::DegenerateConstant);
        }
    }
}

TEST(Quadrics, NonresidueSetExamples)
{
    auto g = geom(11, 1, 3);
    const FieldCtx& f = g->field();
    HomQuadratic sq = HomQuadratic::zero(3);
    sq.coeffs[pair_slot(0, 0, 3)] = 1;
    EXPECT_EQ(nonresidue_direction_set(sq, g).size, 0u);

    // scale invariance of the residue class
    CounterRng rng(8, 8);
    for (int i = 0; i < 20; ++i) {
        const auto h = sample_homogeneous(f, 3, rng);
        const auto e = nonresidue_direction_set(h, g);
        for (DirIndex o = 0; o < g->num_directions(); ++o) {
            const Elem lam = static_cast<Elem>(1 + rng.uniform(10));
            const PointIndex v = g->scale(lam, g->direction_rep(o));
            EXPECT_EQ(e.contains(o), f.is_nonresidue(eval(f, h, g->coords(v))));
        }
    }
}

TEST(Quadrics, NonresidueSetMeanSize)
{
    auto g = geom(11, 1, 3);
    const FieldCtx& f = g->field();
    const int trials = 2000;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(derive_seed(21, static_cast<std::uint64_t>(t)), streams::kExperiment);
        sum += nonresidue_direction_set(sample_homogeneous(f, 3, rng), g).size;
    }
    const double rho = 5.0 / 11.0;
    const double mean = 133 * rho;
    const double var = 133 * rho * (1 - rho);
    EXPECT_NEAR(sum / trials, mean, 4 * std::sqrt(var / trials));
}

TEST(Quadrics, HomogeneousValuesUniformAtQ3)
{
    auto g = geom(3, 1, 3);
    const FieldCtx& f = g->field();
    HomQuadratic h = HomQuadratic::zero(3);
    for (DirIndex o = 0; o < g->num_directions(); ++o) {
        int counts[3] = {0, 0, 0};
        for (std::uint64_t code = 0; code < 729; ++code) {
            std::uint64_t rest = code;
            for (auto& c : h.coeffs) {
                c = static_cast<Elem>(rest % 3);
                rest /= 3;
            }
            ++counts[eval(f, h, g->coords(g->direction_rep(o)))];
        }
        EXPECT_EQ(counts[0], 243);
        EXPECT_EQ(counts[1], 243);
        EXPECT_EQ(counts[2], 243);
    }
}

TEST(Quadrics, SamplerModes)
{
    auto f = build_field(11, 1);
    CounterRng rng(1, 2);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(sample_quadratic(*f, 3, rng, SampleMode::UnitConstant).poly.cst, 1u);

    int rejections = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const auto s = sample_quadratic(*f, 3, rng, SampleMode::AbsIrreducible);
        EXPECT_TRUE(is_absolutely_irreducible(*f, s.poly));
        rejections += s.rejections;
    }
    EXPECT_LT(static_cast<double>(rejections) / (draws + rejections), 0.05);
}

TEST(Quadrics, UniformSamplerMarginals)
{
    auto f = build_field(5, 1);
    CounterRng rng(77, 3);
    std::vector<std::array<int, 5>> counts(6);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto q = sample_quadratic(*f, 2, rng, SampleMode::Uniform).poly;
        const Elem flat[6] = {q.quad[0], q.quad[1], q.quad[2], q.lin[0], q.lin[1], q.cst};
        for (int s = 0; s < 6; ++s)
            ++counts[s][flat[s]];
    }
    for (const auto& slot : counts) {
        double chi2 = 0.0;
        for (int c : slot)
            chi2 += (c - n / 5.0) * (c - n / 5.0) / (n / 5.0);
        EXPECT_LT(chi2, 4.0 + 4 * std::sqrt(8.0)); // 4 degrees of freedom
    }
}

TEST(Quadrics, ScalarMultiples)
{
    auto f = build_field(7, 1);
    const auto q = sum_of_squares_plus_one();
    EXPECT_TRUE(is_scalar_multiple(*f, q, scaled(*f, q, 3)));
    EXPECT_FALSE(is_scalar_multiple(*f, q, scaled(*f, q, 0)));
    auto r = q;
    r.lin[0] = 1;
    EXPECT_FALSE(is_scalar_multiple(*f, q, r));
    EXPECT_TRUE(is_scalar_multiple(*f, InhomQuadratic::zero(3), InhomQuadratic::zero(3)));
}
