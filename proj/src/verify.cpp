#include "nikodym/verify.hpp"

#include "nikodym/error.hpp"

#include <algorithm>
#include <bit>

namespace nikodym {

namespace {

// Marks hits[ω] for every complement point y ≠ x; returns how many ω got
// marked, stopping as soon as every direction is blocked.
std::uint32_t mark_blocked(const Geometry& g, std::span<const PointIndex> comp, PointIndex x,
                           std::vector<std::uint8_t>& hits)
{
    const std::uint32_t nd = g.num_directions();
    std::fill(hits.begin(), hits.end(), 0);
    std::uint32_t marked = 0;
    for (PointIndex y : comp) {
        if (y == x)
            continue;
        const DirIndex o = g.direction_of(g.sub(y, x));
        if (!hits[o]) {
            hits[o] = 1;
            if (++marked == nd)
                break;
        }
    }
    return marked;
}

NikodymReport assemble(std::vector<DirIndex> witnesses, std::optional<std::vector<std::uint32_t>> robust)
{
    NikodymReport r;
    for (PointIndex x = 0; x < witnesses.size(); ++x)
        if (witnesses[x] == kNoDirection)
            r.failures.push_back(x);
    r.ok = r.failures.empty();
    r.witnesses = std::move(witnesses);
    r.robust_counts = std::move(robust);
    return r;
}

} // namespace

NikodymReport nikodym_check(const PointSet& s, bool want_robust)
{
    const Geometry& g = s.geom();
    const auto n = static_cast<std::int64_t>(g.num_points());
    const std::uint32_t nd = g.num_directions();
    const auto comp = s.complement_members();

    std::vector<DirIndex> witnesses(static_cast<std::size_t>(n), kNoDirection);
    std::vector<std::uint32_t> robust(want_robust ? static_cast<std::size_t>(n) : 0, 0);

#pragma omp parallel
    {
        std::vector<std::uint8_t> hits(nd);
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t xi = 0; xi < n; ++xi) {
            const auto x = static_cast<PointIndex>(xi);
            const std::uint32_t marked = mark_blocked(g, comp, x, hits);
            if (marked == nd)
                continue;
            const auto first = std::find(hits.begin(), hits.end(), 0);
            witnesses[x] = static_cast<DirIndex>(first - hits.begin());
            if (want_robust)
                robust[x] = nd - marked;
        }
    }

    std::optional<std::vector<std::uint32_t>> rc;
    if (want_robust)
        rc = std::move(robust);
    return assemble(std::move(witnesses), std::move(rc));
}

NikodymReport nikodym_check_serial(const PointSet& s, bool want_robust)
{
    const Geometry& g = s.geom();
    const std::uint32_t n = g.num_points();
    const std::uint32_t nd = g.num_directions();
    const auto comp = s.complement_members();

    std::vector<DirIndex> witnesses(n, kNoDirection);
    std::vector<std::uint32_t> robust(want_robust ? n : 0, 0);
    std::vector<std::uint8_t> hits(nd);
    for (PointIndex x = 0; x < n; ++x) {
        std::fill(hits.begin(), hits.end(), 0);
        for (PointIndex y : comp)
            if (y != x)
                hits[g.direction_of(g.sub(y, x))] = 1;
        std::uint32_t free = 0;
        for (DirIndex o = 0; o < nd; ++o) {
            if (hits[o])
                continue;
            if (witnesses[x] == kNoDirection)
                witnesses[x] = o;
            ++free;
        }
        if (want_robust)
            robust[x] = free;
    }

    std::optional<std::vector<std::uint32_t>> rc;
    if (want_robust)
        rc = std::move(robust);
    return assemble(std::move(witnesses), std::move(rc));
}

namespace {

// Base point of the line through y in direction o: the point whose pivot
// coordinate is zero.
inline PointIndex line_base(const Geometry& g, PointIndex y, DirIndex o)
{
    const unsigned j = g.direction_pivot(o);
    return g.axpy(y, g.field().neg(g.coords(y)[j]), g.direction_rep(o));
}

PointIndex first_free_base(const Geometry& g, DirIndex o, const std::vector<std::uint8_t>& marked)
{
    const unsigned j = g.direction_pivot(o);
    for (PointIndex b = 0; b < g.num_points(); ++b)
        if (g.coords(b)[j] == 0 && !marked[b])
            return b;
    return kNoPoint;
}

KakeyaReport assemble(std::vector<PointIndex> witnesses)
{
    KakeyaReport r;
    for (DirIndex o = 0; o < witnesses.size(); ++o)
        if (witnesses[o] == kNoPoint)
            r.failures.push_back(o);
    r.ok = r.failures.empty();
    r.witnesses = std::move(witnesses);
    return r;
}

} // namespace

KakeyaReport kakeya_check(const PointSet& s)
{
    const Geometry& g = s.geom();
    const auto nd = static_cast<std::int64_t>(g.num_directions());
    const auto comp = s.complement_members();
    std::vector<PointIndex> witnesses(static_cast<std::size_t>(nd), kNoPoint);

#pragma omp parallel
    {
        std::vector<std::uint8_t> marked(g.num_points(), 0);
        std::vector<PointIndex> touched;
        touched.reserve(comp.size());
#pragma omp for schedule(dynamic, 4)
        for (std::int64_t oi = 0; oi < nd; ++oi) {
            const auto o = static_cast<DirIndex>(oi);
            for (PointIndex y : comp) {
                const PointIndex b = line_base(g, y, o);
                if (!marked[b]) {
                    marked[b] = 1;
                    touched.push_back(b);
                }
            }
            witnesses[o] = first_free_base(g, o, marked);
            for (PointIndex b : touched)
                marked[b] = 0;
            touched.clear();
        }
    }
    return assemble(std::move(witnesses));
}

KakeyaReport kakeya_check_serial(const PointSet& s)
{
    const Geometry& g = s.geom();
    const std::uint32_t nd = g.num_directions();
    const auto comp = s.complement_members();
    std::vector<PointIndex> witnesses(nd, kNoPoint);
    for (DirIndex o = 0; o < nd; ++o) {
        std::vector<std::uint8_t> marked(g.num_points(), 0);
        for (PointIndex y : comp)
            marked[line_base(g, y, o)] = 1;
        witnesses[o] = first_free_base(g, o, marked);
    }
    return assemble(std::move(witnesses));
}

std::vector<std::uint32_t> robust_histogram(const PointSet& s) { return *nikodym_check(s, true).robust_counts; }

std::vector<std::uint32_t> complement_hits(const PointSet& s, PointIndex x)
{
    const Geometry& g = s.geom();
    std::vector<std::uint32_t> hits(g.num_directions(), 0);
    for (PointIndex y = 0; y < g.num_points(); ++y)
        if (y != x && !s.contains(y))
            ++hits[g.direction_of(g.sub(y, x))];
    return hits;
}

std::vector<RepairChoice> best_repair_directions(const PointSet& s, std::span<const PointIndex> points)
{
    const Geometry& g = s.geom();
    const auto comp = s.complement_members();
    const auto count = static_cast<std::int64_t>(points.size());
    std::vector<RepairChoice> out(points.size());

#pragma omp parallel
    {
        std::vector<std::uint32_t> hits(g.num_directions());
#pragma omp for schedule(dynamic, 8)
        for (std::int64_t i = 0; i < count; ++i) {
            const PointIndex x = points[static_cast<std::size_t>(i)];
            std::fill(hits.begin(), hits.end(), 0);
            for (PointIndex y : comp)
                if (y != x)
                    ++hits[g.direction_of(g.sub(y, x))];
            const auto best = std::min_element(hits.begin(), hits.end());
            out[static_cast<std::size_t>(i)] = {x, static_cast<DirIndex>(best - hits.begin()), *best};
        }
    }
    return out;
}

std::vector<DirIndex> extract_witnesses(const PointSet& s)
{
    auto report = nikodym_check(s);
    if (!report.ok)
        throw Error(Errc::NotNikodym, std::to_string(report.failures.size()) + " points have no contained punctured line");
    return std::move(report.witnesses);
}

MinimumResult brute_force_minimum(const GeomPtr& geom, SetKind kind)
{
    if (geom->q() != 3 || geom->dim() != 2)
        throw Error(Errc::CapacityExceeded, "exhaustive minimum is limited to q = 3, d = 2");
    const std::uint32_t n = geom->num_points();
    const std::uint64_t subsets = std::uint64_t{1} << n;
    std::uint64_t checked = 0;
    for (unsigned card = 0; card <= n; ++card) {
        for (std::uint64_t mask = 0; mask < subsets; ++mask) {
            if (static_cast<unsigned>(std::popcount(mask)) != card)
                continue;
            ++checked;
            PointSet s = PointSet::from_words(geom, {mask});
            const bool ok = kind == SetKind::Nikodym ? nikodym_check_serial(s).ok : kakeya_check_serial(s).ok;
            if (ok)
                return MinimumResult{card, std::move(s), checked};
        }
    }
    throw Error(Errc::NotFound, "no set of the requested kind");
}

} // namespace nikodym
