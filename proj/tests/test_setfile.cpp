#include "nikodym/constructions.hpp"
#include "nikodym/error.hpp"
#include "nikodym/report.hpp"
#include "nikodym/setfile.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

using namespace nikodym;

namespace {

GeomPtr geom(std::uint64_t p, unsigned m, unsigned d) { return Geometry::make(build_field(p, m), d); }

PointSet random_set(const GeomPtr& g, std::uint64_t seed)
{
    return sample_bernoulli(g, seed, 5, quantize_probability(0.5));
}

bool corrupt(std::span<const std::uint8_t> bytes)
{
    try {
        decode_set(bytes);
    } catch (const Error& e) {
        return e.code() == Errc::CorruptFile;
    }
    return false;
}

std::uint64_t read_le(const std::vector<std::uint8_t>& b, std::size_t at, int n)
{
    std::uint64_t v = 0;
    for (int i = n; i-- > 0;)
        v = (v << 8) | b[at + static_cast<std::size_t>(i)];
    return v;
}

} // namespace

TEST(SetFile, FullPlaneOverF3Layout)
{
    const auto bytes = encode_set(PointSet::full(geom(3, 1, 2)));
    ASSERT_EQ(bytes.size(), 8u + 2 + 8 + 4 + 4 + 2 * 8 + 2);
    EXPECT_EQ(std::memcmp(bytes.data(), "NKDSET01", 8), 0);
    EXPECT_EQ(read_le(bytes, 8, 2), 1u);
    EXPECT_EQ(read_le(bytes, 10, 8), 3u);
    EXPECT_EQ(read_le(bytes, 18, 4), 1u);
    EXPECT_EQ(read_le(bytes, 22, 4), 2u);
    EXPECT_EQ(read_le(bytes, 26, 8), 0u); // modulus x
    EXPECT_EQ(read_le(bytes, 34, 8), 1u);
    EXPECT_EQ(bytes[42], 0xFF);
    EXPECT_EQ(bytes[43], 0x01);
}

TEST(SetFile, RoundTripIsByteExact)
{
    for (auto [p, m, d] : {std::tuple{3ULL, 2u, 2u}, {11ULL, 1u, 3u}, {5ULL, 1u, 1u}}) {
        auto g = geom(p, m, d);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto s = random_set(g, seed);
            const auto bytes = encode_set(s);
            const auto back = decode_set(bytes);
            ASSERT_EQ(back.set, s);
            ASSERT_TRUE(back.canonical_modulus);
            ASSERT_EQ(encode_set(back.set), bytes);
        }
    }
}

TEST(SetFile, RejectsDefects)
{
    const auto good = encode_set(random_set(geom(3, 2, 2), 1));
    auto bytes = good;
    bytes.pop_back();
    EXPECT_TRUE(corrupt(bytes));
    bytes = good;
    bytes.push_back(0);
    EXPECT_TRUE(corrupt(bytes));
    bytes = good;
    bytes[0] = 'X';
    EXPECT_TRUE(corrupt(bytes));
    bytes = good;
    bytes[8] = 2;
    EXPECT_TRUE(corrupt(bytes));
    bytes = good;
    bytes[10] = 9; // p = 9 is not prime
    EXPECT_TRUE(corrupt(bytes));
    EXPECT_TRUE(corrupt(std::span<const std::uint8_t>(good.data(), 5)));

    // q^d = 81 leaves 7 unused bits in the last byte
    bytes = good;
    bytes.back() |= 0x80;
    EXPECT_TRUE(corrupt(bytes));
}

TEST(SetFile, FlagsNonCanonicalModulus)
{
    auto g = Geometry::make(FieldCtx::build_with_modulus(3, {2, 1, 1}), 2);
    auto s = PointSet::empty(g);
    s.insert(5);
    const auto back = decode_set(encode_set(s));
    EXPECT_FALSE(back.canonical_modulus);
    EXPECT_TRUE(back.set.contains(5));
    EXPECT_EQ(back.set.size(), 1u);
}

TEST(SetFile, SaveAndLoad)
{
    const auto dir = std::filesystem::temp_directory_path() / "nikodym_setfile_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "s.nks";
    const auto s = random_set(geom(7, 1, 2), 4);
    save_set(path, s);
    EXPECT_EQ(load_set(path).set, s);
    try {
        load_set(dir / "missing.nks");
        ADD_FAILURE() << "expected IoError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::IoError);
    }
    std::filesystem::remove_all(dir);
}

TEST(Report, DeterministicForFixedSeed)
{
    auto g = geom(13, 1, 3);
    ConstructionParams p;
    p.seed = 11;
    auto make = [&] {
        const auto r = quadric_pipeline(g, p);
        auto j = run_report("construct", *g);
        j["params"] = to_json(p);
        j["trace"] = to_json(r.trace);
        return std::pair{j.dump(2), encode_set(r.set)};
    };
    const auto a = make();
    const auto b = make();
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
}
