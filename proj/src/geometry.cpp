#include "nikodym/geometry.hpp"

#include "nikodym/error.hpp"

#include <bit>
#include <string>

namespace nikodym {

std::shared_ptr<const Geometry> Geometry::make(FieldPtr field, unsigned d)
{
    if (!field)
        throw Error(Errc::ParamError, "geometry needs a field");
    if (d == 0)
        throw Error(Errc::ParamError, "dimension must be at least 1");
    const std::uint64_t q = field->q();
    std::uint64_t n = 1;
    for (unsigned j = 0; j < d; ++j) {
        n *= q;
        if (n > kMaxPoints)
            throw Error(Errc::CapacityExceeded, "q^d exceeds 2^22 points");
    }

    std::shared_ptr<Geometry> g(new Geometry());
    g->field_ = std::move(field);
    g->d_ = d;
    g->num_points_ = static_cast<std::uint32_t>(n);
    g->num_directions_ = static_cast<std::uint32_t>((n - 1) / (q - 1));
    g->stride_.resize(d);
    std::uint32_t s = 1;
    for (unsigned j = 0; j < d; ++j) {
        g->stride_[j] = s;
        s *= static_cast<std::uint32_t>(q);
    }

    g->coords_.resize(n * d);
    for (std::uint64_t x = 0; x < n; ++x) {
        std::uint64_t rest = x;
        for (unsigned j = 0; j < d; ++j) {
            g->coords_[x * d + j] = static_cast<Elem>(rest % q);
            rest /= q;
        }
    }

    const FieldCtx& f = *g->field_;
    std::vector<DirIndex> ordinal_of_rep(n, kNoDirection);
    g->dir_reps_.reserve(g->num_directions_);
    g->dir_pivot_.reserve(g->num_directions_);
    for (PointIndex x = 1; x < n; ++x) {
        const auto c = g->coords(x);
        unsigned j = 0;
        while (c[j] == 0)
            ++j;
        if (c[j] == 1) {
            ordinal_of_rep[x] = static_cast<DirIndex>(g->dir_reps_.size());
            g->dir_reps_.push_back(x);
            g->dir_pivot_.push_back(static_cast<std::uint8_t>(j));
        }
    }
    g->dir_of_.assign(n, kNoDirection);
    for (PointIndex x = 1; x < n; ++x) {
        const auto c = g->coords(x);
        unsigned j = 0;
        while (c[j] == 0)
            ++j;
        const PointIndex rep = g->scale(f.inv(c[j]), x);
        g->dir_of_[x] = ordinal_of_rep[rep];
    }
    return g;
}

PointIndex Geometry::index_of(std::span<const Elem> c) const
{
    if (c.size() != d_)
        throw Error(Errc::DimensionMismatch, "coordinate count does not match dimension");
    PointIndex idx = 0;
    for (unsigned j = 0; j < d_; ++j) {
        if (c[j] >= q())
            throw Error(Errc::ParamError, "coordinate out of range");
        idx += c[j] * stride_[j];
    }
    return idx;
}

Point Geometry::point(PointIndex x) const
{
    const auto c = coords(x);
    return Point{std::vector<Elem>(c.begin(), c.end()), x};
}

PointIndex Geometry::add(PointIndex a, PointIndex b) const noexcept
{
    const Elem* ca = coords_.data() + std::size_t{a} * d_;
    const Elem* cb = coords_.data() + std::size_t{b} * d_;
    PointIndex idx = 0;
    for (unsigned j = 0; j < d_; ++j)
        idx += field_->add(ca[j], cb[j]) * stride_[j];
    return idx;
}

PointIndex Geometry::sub(PointIndex a, PointIndex b) const noexcept
{
    const Elem* ca = coords_.data() + std::size_t{a} * d_;
    const Elem* cb = coords_.data() + std::size_t{b} * d_;
    PointIndex idx = 0;
    for (unsigned j = 0; j < d_; ++j)
        idx += field_->sub(ca[j], cb[j]) * stride_[j];
    return idx;
}

PointIndex Geometry::scale(Elem t, PointIndex v) const noexcept
{
    const Elem* cv = coords_.data() + std::size_t{v} * d_;
    PointIndex idx = 0;
    for (unsigned j = 0; j < d_; ++j)
        idx += field_->mul(t, cv[j]) * stride_[j];
    return idx;
}

PointIndex Geometry::axpy(PointIndex x, Elem t, PointIndex v) const noexcept
{
    const Elem* cx = coords_.data() + std::size_t{x} * d_;
    const Elem* cv = coords_.data() + std::size_t{v} * d_;
    PointIndex idx = 0;
    for (unsigned j = 0; j < d_; ++j)
        idx += field_->add(cx[j], field_->mul(t, cv[j])) * stride_[j];
    return idx;
}

Direction Geometry::canonical_direction(std::span<const Elem> v) const
{
    const PointIndex idx = index_of(v);
    if (idx == 0)
        throw Error(Errc::ZeroVector, "direction of the zero vector");
    return direction(dir_of_[idx]);
}

Direction Geometry::direction(DirIndex ord) const
{
    const auto c = coords(dir_reps_.at(ord));
    return Direction{std::vector<Elem>(c.begin(), c.end()), ord};
}

std::vector<Direction> Geometry::enumerate_directions() const
{
    std::vector<Direction> out;
    out.reserve(num_directions_);
    for (DirIndex o = 0; o < num_directions_; ++o)
        out.push_back(direction(o));
    return out;
}

std::vector<PointIndex> Geometry::line(PointIndex x, DirIndex dir) const
{
    std::vector<PointIndex> out;
    out.reserve(q());
    const PointIndex v = dir_reps_.at(dir);
    for (Elem t = 0; t < q(); ++t)
        out.push_back(axpy(x, t, v));
    return out;
}

std::vector<PointIndex> Geometry::punctured_line(PointIndex x, DirIndex dir) const
{
    std::vector<PointIndex> out;
    out.reserve(q() - 1);
    const PointIndex v = dir_reps_.at(dir);
    for (Elem t = 1; t < q(); ++t)
        out.push_back(axpy(x, t, v));
    return out;
}

// ---------------------------------------------------------------------------

PointSet::PointSet(GeomPtr geom, std::vector<std::uint64_t> words)
    : geom_(std::move(geom)), words_(std::move(words))
{
    mask_tail();
    size_ = recount();
}

PointSet PointSet::empty(GeomPtr geom)
{
    const std::size_t n = (geom->num_points() + 63) / 64;
    return PointSet(std::move(geom), std::vector<std::uint64_t>(n, 0));
}

PointSet PointSet::full(GeomPtr geom)
{
    const std::size_t n = (geom->num_points() + 63) / 64;
    return PointSet(std::move(geom), std::vector<std::uint64_t>(n, ~std::uint64_t{0}));
}

PointSet PointSet::from_words(GeomPtr geom, std::vector<std::uint64_t> words)
{
    const std::size_t n = (geom->num_points() + 63) / 64;
    if (words.size() != n)
        throw Error(Errc::DimensionMismatch, "bitmap length does not match geometry");
    const unsigned tail = geom->num_points() % 64;
    if (tail != 0 && (words.back() >> tail) != 0)
        throw Error(Errc::CorruptFile, "bits set beyond the last point");
    return PointSet(std::move(geom), std::move(words));
}

void PointSet::mask_tail() noexcept
{
    const unsigned tail = geom_->num_points() % 64;
    if (tail != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << tail) - 1;
}

void PointSet::insert(PointIndex x) noexcept
{
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (!(words_[x >> 6] & bit)) {
        words_[x >> 6] |= bit;
        ++size_;
    }
}

void PointSet::remove(PointIndex x) noexcept
{
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (words_[x >> 6] & bit) {
        words_[x >> 6] &= ~bit;
        --size_;
    }
}

std::uint64_t PointSet::recount() const noexcept
{
    std::uint64_t n = 0;
    for (auto w : words_)
        n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
}

PointSet PointSet::complement() const
{
    std::vector<std::uint64_t> w(words_.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = ~words_[i];
    return PointSet(geom_, std::move(w));
}

std::vector<PointIndex> PointSet::members() const
{
    std::vector<PointIndex> out;
    out.reserve(size_);
    for (PointIndex x = 0; x < geom_->num_points(); ++x)
        if (contains(x))
            out.push_back(x);
    return out;
}

std::vector<PointIndex> PointSet::complement_members() const
{
    std::vector<PointIndex> out;
    out.reserve(geom_->num_points() - size_);
    for (PointIndex x = 0; x < geom_->num_points(); ++x)
        if (!contains(x))
            out.push_back(x);
    return out;
}

namespace {

template <typename Op>
PointSet combine(const PointSet& a, const PointSet& b, Op op)
{
    if (a.geom().num_points() != b.geom().num_points() || a.geom().dim() != b.geom().dim() ||
        !a.geom().same_field(b.geom()))
        throw Error(Errc::FieldMismatch, "point sets live in different spaces");
    const auto wa = a.words();
    const auto wb = b.words();
    std::vector<std::uint64_t> w(wa.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = op(wa[i], wb[i]);
    return PointSet::from_words(a.geom_ptr(), std::move(w));
}

} // namespace

PointSet set_union(const PointSet& a, const PointSet& b)
{
    return combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x | y; });
}

PointSet set_difference(const PointSet& a, const PointSet& b)
{
    return combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
}

PointSet set_intersection(const PointSet& a, const PointSet& b)
{
    return combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

PointSet product_set(const PointSet& s1, const PointSet& s2)
{
    if (!s1.geom().same_field(s2.geom()))
        throw Error(Errc::FieldMismatch, "product of sets over different fields");
    auto geom = Geometry::make(s1.geom().field_ptr(), s1.geom().dim() + s2.geom().dim());
    PointSet out = PointSet::empty(geom);
    const PointIndex n1 = s1.geom().num_points();
    const auto m1 = s1.members();
    for (PointIndex y : s2.members())
        for (PointIndex x : m1)
            out.insert(x + n1 * y);
    return out;
}

DirectionSet DirectionSet::none(GeomPtr geom)
{
    DirectionSet s;
    s.flags.assign(geom->num_directions(), 0);
    s.geom = std::move(geom);
    return s;
}

DirectionSet DirectionSet::all(GeomPtr geom)
{
    DirectionSet s;
    s.flags.assign(geom->num_directions(), 1);
    s.size = geom->num_directions();
    s.geom = std::move(geom);
    return s;
}

void DirectionSet::intersect_with(const DirectionSet& other)
{
    size = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        flags[i] = flags[i] && other.flags[i];
        size += flags[i];
    }
}

} // namespace nikodym
