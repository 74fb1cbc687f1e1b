#include "nikodym/setfile.hpp"

#include "nikodym/error.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace nikodym {

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes)
{
    for (int i = 0; i < bytes; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}

    std::uint64_t le(int bytes)
    {
        need(static_cast<std::size_t>(bytes));
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i)
            v |= std::uint64_t{bytes_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
        pos_ += static_cast<std::size_t>(bytes);
        return v;
    }

    std::span<const std::uint8_t> take(std::size_t n)
    {
        need(n);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const
    {
        if (bytes_.size() - pos_ < n)
            throw Error(Errc::CorruptFile, "truncated set file");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> encode_set(const PointSet& s)
{
    const Geometry& g = s.geom();
    const FieldSpec& spec = g.field().spec();
    std::vector<std::uint8_t> out(std::begin(kSetMagic), std::end(kSetMagic));
    put_le(out, kSetVersion, 2);
    put_le(out, spec.p, 8);
    put_le(out, spec.m, 4);
    put_le(out, g.dim(), 4);
    for (auto c : spec.modulus)
        put_le(out, c, 8);
    const std::size_t nbytes = (std::size_t{g.num_points()} + 7) / 8;
    const auto words = s.words();
    for (std::size_t i = 0; i < nbytes; ++i)
        out.push_back(static_cast<std::uint8_t>(words[i / 8] >> (8 * (i % 8))));
    return out;
}

LoadedSet decode_set(std::span<const std::uint8_t> bytes)
{
    Reader r(bytes);
    const auto magic = r.take(8);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kSetMagic)))
        throw Error(Errc::CorruptFile, "bad magic");
    if (r.le(2) != kSetVersion)
        throw Error(Errc::CorruptFile, "unsupported version");
    const std::uint64_t p = r.le(8);
    const std::uint64_t m = r.le(4);
    const std::uint64_t d = r.le(4);
    if (p < 3 || p > kMaxFieldOrder || m == 0 || m > 20 || d == 0 || d > 22)
        throw Error(Errc::CorruptFile, "header values out of range");
    std::vector<std::uint64_t> modulus(m + 1);
    for (auto& c : modulus)
        c = r.le(8);

    FieldPtr field;
    try {
        field = FieldCtx::build_with_modulus(p, modulus);
    } catch (const Error& e) {
        throw Error(Errc::CorruptFile, std::string("invalid field header: ") + e.what());
    }
    GeomPtr geom;
    try {
        geom = Geometry::make(field, static_cast<unsigned>(d));
    } catch (const Error& e) {
        throw Error(Errc::CorruptFile, std::string("invalid geometry header: ") + e.what());
    }

    const std::size_t nbytes = (std::size_t{geom->num_points()} + 7) / 8;
    const auto bitmap = r.take(nbytes);
    if (r.remaining() != 0)
        throw Error(Errc::CorruptFile, "trailing bytes after bitmap");
    std::vector<std::uint64_t> words((geom->num_points() + 63) / 64, 0);
    for (std::size_t i = 0; i < nbytes; ++i)
        words[i / 8] |= std::uint64_t{bitmap[i]} << (8 * (i % 8));
    return LoadedSet{PointSet::from_words(geom, std::move(words)), field->canonical_modulus()};
}

void save_set(const std::filesystem::path& path, const PointSet& s)
{
    const auto bytes = encode_set(s);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(Errc::IoError, "write failed for " + path.string());
}

LoadedSet load_set(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_set(bytes);
}

} // namespace nikodym
