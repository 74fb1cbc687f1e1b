#include "nikodym/quadrics.hpp"

#include "nikodym/error.hpp"

#include <algorithm>

namespace nikodym {

InhomQuadratic InhomQuadratic::zero(unsigned d)
{
    return InhomQuadratic{d, std::vector<Elem>(num_pairs(d), 0), std::vector<Elem>(d, 0), 0};
}

HomQuadratic HomQuadratic::zero(unsigned d) { return HomQuadratic{d, std::vector<Elem>(num_pairs(d), 0)}; }

namespace {

Elem quad_part(const FieldCtx& f, std::span<const Elem> coeffs, unsigned d, std::span<const Elem> x)
{
    Elem acc = 0;
    std::size_t slot = 0;
    for (unsigned a = 0; a < d; ++a) {
        for (unsigned b = a; b < d; ++b, ++slot) {
            if (coeffs[slot] == 0)
                continue;
            acc = f.add(acc, f.mul(coeffs[slot], f.mul(x[a], x[b])));
        }
    }
    return acc;
}

Elem linear_part(const FieldCtx& f, std::span<const Elem> lin, std::span<const Elem> x)
{
    Elem acc = 0;
    for (std::size_t a = 0; a < lin.size(); ++a)
        acc = f.add(acc, f.mul(lin[a], x[a]));
    return acc;
}

void check_dim(std::size_t got, unsigned d)
{
    if (got != d)
        throw Error(Errc::DimensionMismatch, "point dimension does not match polynomial");
}

std::vector<Elem> symmetric_matrix(const FieldCtx& f, std::span<const Elem> coeffs, unsigned d, unsigned n)
{
    const Elem half = f.inv(f.from_int(2));
    std::vector<Elem> m(std::size_t{n} * n, 0);
    std::size_t slot = 0;
    for (unsigned a = 0; a < d; ++a) {
        for (unsigned b = a; b < d; ++b, ++slot) {
            if (a == b) {
                m[a * n + a] = coeffs[slot];
            } else {
                const Elem h = f.mul(coeffs[slot], half);
                m[a * n + b] = h;
                m[b * n + a] = h;
            }
        }
    }
    return m;
}

} // namespace

Elem eval(const FieldCtx& f, const InhomQuadratic& q, std::span<const Elem> x)
{
    check_dim(x.size(), q.d);
    return f.add(f.add(quad_part(f, q.quad, q.d, x), linear_part(f, q.lin, x)), q.cst);
}

Elem eval(const FieldCtx& f, const HomQuadratic& h, std::span<const Elem> v)
{
    check_dim(v.size(), h.d);
    return quad_part(f, h.coeffs, h.d, v);
}

SampledQuadratic sample_quadratic(const FieldCtx& f, unsigned d, CounterRng& rng, SampleMode mode)
{
    auto draw = [&](bool unit_constant) {
        InhomQuadratic q = InhomQuadratic::zero(d);
        for (auto& c : q.quad)
            c = static_cast<Elem>(rng.uniform(f.q()));
        for (auto& c : q.lin)
            c = static_cast<Elem>(rng.uniform(f.q()));
        q.cst = unit_constant ? Elem{1} : static_cast<Elem>(rng.uniform(f.q()));
        return q;
    };

    switch (mode) {
    case SampleMode::Uniform:
        return {draw(false), 0};
    case SampleMode::UnitConstant:
        return {draw(true), 0};
    case SampleMode::AbsIrreducible:
        for (int tries = 0; tries < kMaxSampleTries; ++tries) {
            InhomQuadratic q = draw(false);
            if (is_absolutely_irreducible(f, q))
                return {std::move(q), tries};
        }
        throw Error(Errc::SamplingFailure, "no absolutely irreducible quadratic within the rejection budget");
    }
    return {};
}

HomQuadratic sample_homogeneous(const FieldCtx& f, unsigned d, CounterRng& rng)
{
    HomQuadratic h = HomQuadratic::zero(d);
    for (auto& c : h.coeffs)
        c = static_cast<Elem>(rng.uniform(f.q()));
    return h;
}

unsigned matrix_rank(const FieldCtx& f, std::vector<Elem> m, unsigned n)
{
    unsigned rank = 0;
    for (unsigned col = 0; col < n && rank < n; ++col) {
        unsigned piv = rank;
        while (piv < n && m[piv * n + col] == 0)
            ++piv;
        if (piv == n)
            continue;
        if (piv != rank)
            for (unsigned j = 0; j < n; ++j)
                std::swap(m[piv * n + j], m[rank * n + j]);
        const Elem pinv = f.inv(m[rank * n + col]);
        for (unsigned i = rank + 1; i < n; ++i) {
            const Elem factor = f.mul(m[i * n + col], pinv);
            if (factor == 0)
                continue;
            for (unsigned j = col; j < n; ++j)
                m[i * n + j] = f.sub(m[i * n + j], f.mul(factor, m[rank * n + j]));
        }
        ++rank;
    }
    return rank;
}

std::vector<Elem> augmented_matrix(const FieldCtx& f, const InhomQuadratic& q)
{
    const unsigned n = q.d + 1;
    auto m = symmetric_matrix(f, q.quad, q.d, n);
    const Elem half = f.inv(f.from_int(2));
    for (unsigned a = 0; a < q.d; ++a) {
        const Elem h = f.mul(q.lin[a], half);
        m[a * n + q.d] = h;
        m[q.d * n + a] = h;
    }
    m[q.d * n + q.d] = q.cst;
    return m;
}

bool is_absolutely_irreducible(const FieldCtx& f, const InhomQuadratic& q)
{
    if (std::all_of(q.quad.begin(), q.quad.end(), [](Elem c) { return c == 0; }))
        return false;
    return matrix_rank(f, augmented_matrix(f, q), q.d + 1) >= 3;
}

HomQuadratic discriminant(const FieldCtx& f, const InhomQuadratic& q)
{
    if (q.cst != 1)
        throw Error(Errc::NotNormalized, "discriminant needs constant term 1");
    const Elem four = f.from_int(4);
    const Elem two = f.from_int(2);
    HomQuadratic h = HomQuadratic::zero(q.d);
    std::size_t slot = 0;
    for (unsigned a = 0; a < q.d; ++a) {
        for (unsigned b = a; b < q.d; ++b, ++slot) {
            const Elem ll = a == b ? f.mul(q.lin[a], q.lin[a]) : f.mul(two, f.mul(q.lin[a], q.lin[b]));
            h.coeffs[slot] = f.sub(ll, f.mul(four, q.quad[slot]));
        }
    }
    return h;
}

bool is_perfect_square_abs(const FieldCtx& f, const HomQuadratic& h)
{
    return matrix_rank(f, symmetric_matrix(f, h.coeffs, h.d, h.d), h.d) <= 1;
}

namespace {

std::vector<Elem> flatten(const InhomQuadratic& q)
{
    std::vector<Elem> v(q.quad);
    v.insert(v.end(), q.lin.begin(), q.lin.end());
    v.push_back(q.cst);
    return v;
}

} // namespace

bool is_scalar_multiple(const FieldCtx& f, const InhomQuadratic& q1, const InhomQuadratic& q2)
{
    if (q1.d != q2.d)
        return false;
    const auto a = flatten(q1);
    const auto b = flatten(q2);
    const auto it = std::find_if(a.begin(), a.end(), [](Elem c) { return c != 0; });
    if (it == a.end())
        return std::all_of(b.begin(), b.end(), [](Elem c) { return c == 0; });
    const auto i = static_cast<std::size_t>(it - a.begin());
    const Elem lambda = f.div(b[i], a[i]);
    if (lambda == 0)
        return false;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (f.mul(lambda, a[j]) != b[j])
            return false;
    return true;
}

InhomQuadratic scaled(const FieldCtx& f, const InhomQuadratic& q, Elem lambda)
{
    InhomQuadratic out = q;
    for (auto& c : out.quad)
        c = f.mul(c, lambda);
    for (auto& c : out.lin)
        c = f.mul(c, lambda);
    out.cst = f.mul(out.cst, lambda);
    return out;
}

PointSet zero_locus(const InhomQuadratic& q, const GeomPtr& geom)
{
    check_dim(geom->dim(), q.d);
    const FieldCtx& f = geom->field();
    const std::uint32_t n = geom->num_points();
    const std::int64_t nwords = (n + 63) / 64;
    std::vector<std::uint64_t> words(static_cast<std::size_t>(nwords), 0);

#pragma omp parallel for schedule(static)
    for (std::int64_t w = 0; w < nwords; ++w) {
        std::uint64_t bits = 0;
        const auto base = static_cast<PointIndex>(w * 64);
        for (unsigned i = 0; i < 64 && base + i < n; ++i)
            if (eval(f, q, geom->coords(base + i)) == 0)
                bits |= std::uint64_t{1} << i;
        words[static_cast<std::size_t>(w)] = bits;
    }
    return PointSet::from_words(geom, std::move(words));
}

const char* avoid_case_name(AvoidCase c) noexcept
{
    switch (c) {
    case AvoidCase::NoRealRoot: return "no-real-root";
    case AvoidCase::HasRoot: return "has-root";
    case AvoidCase::Tangent: return "tangent";
    case AvoidCase::DegenerateConstant: return "degenerate-constant";
    }
    return "unknown";
}

AvoidanceVerdict direction_avoids(const FieldCtx& f, const InhomQuadratic& q, std::span<const Elem> omega)
{
    check_dim(omega.size(), q.d);
    if (q.cst == 0)
        throw Error(Errc::PrecondViolation, "quadratic vanishes at the origin");
    const Elem norm = f.inv(q.cst);
    // Restriction t ↦ q2 t² + q1 t + 1 after scaling Q to Q(0) = 1.
    const Elem q2 = f.mul(norm, quad_part(f, q.quad, q.d, omega));
    const Elem q1 = f.mul(norm, linear_part(f, q.lin, omega));
    if (q2 != 0) {
        const Elem disc = f.sub(f.mul(q1, q1), f.mul(f.from_int(4), q2));
        if (disc == 0)
            return {false, AvoidCase::Tangent};
        if (f.is_nonresidue(disc))
            return {true, AvoidCase::NoRealRoot};
        return {false, AvoidCase::HasRoot};
    }
    if (q1 != 0)
        return {false, AvoidCase::HasRoot};
    return {true, AvoidCase::DegenerateConstant};
}

DirectionSet nonresidue_direction_set(const HomQuadratic& h, const GeomPtr& geom)
{
    check_dim(geom->dim(), h.d);
    const FieldCtx& f = geom->field();
    DirectionSet out = DirectionSet::none(geom);
    const auto nd = static_cast<std::int64_t>(geom->num_directions());
    std::uint32_t count = 0;

#pragma omp parallel for schedule(static) reduction(+ : count)
    for (std::int64_t o = 0; o < nd; ++o) {
        const auto rep = geom->coords(geom->direction_rep(static_cast<DirIndex>(o)));
        if (f.is_nonresidue(eval(f, h, rep))) {
            out.flags[static_cast<std::size_t>(o)] = 1;
            ++count;
        }
    }
    out.size = count;
    return out;
}

DirectionSet avoidance_direction_set(const InhomQuadratic& q, const GeomPtr& geom)
{
    check_dim(geom->dim(), q.d);
    const FieldCtx& f = geom->field();
    DirectionSet out = DirectionSet::none(geom);
    for (DirIndex o = 0; o < geom->num_directions(); ++o) {
        if (direction_avoids(f, q, geom->coords(geom->direction_rep(o))).avoids) {
            out.flags[o] = 1;
            ++out.size;
        }
    }
    return out;
}

} // namespace nikodym
