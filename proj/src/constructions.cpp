#include "nikodym/constructions.hpp"

#include "nikodym/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nikodym {

void ConstructionParams::validate() const
{
    if (!(eps > 0.0 && eps < 0.5))
        throw Error(Errc::ParamError, "eps must lie in (0, 1/2)");
    if (!(c_const > 2.0))
        throw Error(Errc::ParamError, "C must exceed 2");
    if (max_retries < 1)
        throw Error(Errc::ParamError, "max_retries must be positive");
}

PointSet sample_bernoulli(const GeomPtr& geom, std::uint64_t seed, std::uint64_t stream, const Threshold& t)
{
    const std::uint32_t n = geom->num_points();
    const std::int64_t nwords = (n + 63) / 64;
    std::vector<std::uint64_t> words(static_cast<std::size_t>(nwords), 0);

#pragma omp parallel for schedule(static)
    for (std::int64_t w = 0; w < nwords; ++w) {
        std::uint64_t bits = 0;
        const auto base = static_cast<std::uint64_t>(w) * 64;
        for (unsigned i = 0; i < 64 && base + i < n; ++i)
            if (t.accept(rng_word(seed, stream, base + i)))
                bits |= std::uint64_t{1} << i;
        words[static_cast<std::size_t>(w)] = bits;
    }
    return PointSet::from_words(geom, std::move(words));
}

// ---------------------------------------------------------------------------

double random_inclusion_probability(unsigned d, std::uint32_t q, double eps)
{
    const double p = 1.0 - (static_cast<double>(d) - 1.0 + eps) * std::log(static_cast<double>(q)) / q;
    if (!(p > 0.0 && p < 1.0))
        throw Error(Errc::ParamError, "inclusion probability 1 - (d-1+eps) ln q / q is outside (0, 1)");
    return p;
}

RandomResult random_nikodym_attempts(const GeomPtr& geom, const ConstructionParams& params)
{
    params.validate();
    RandomResult result;
    result.trace.inclusion = quantize_probability(random_inclusion_probability(geom->dim(), geom->q(), params.eps));
    for (int a = 0; a < params.max_retries; ++a) {
        const std::uint64_t sub = derive_seed(params.seed, static_cast<std::uint64_t>(a));
        PointSet s = sample_bernoulli(geom, sub, streams::kRandomSet, result.trace.inclusion);
        const auto report = nikodym_check(s);
        result.trace.attempts.push_back({a, sub, s.size(), report.failures.size()});
        if (report.ok) {
            result.set = std::move(s);
            break;
        }
    }
    return result;
}

PointSet random_nikodym(const GeomPtr& geom, const ConstructionParams& params, RandomTrace* trace)
{
    auto r = random_nikodym_attempts(geom, params);
    if (trace)
        *trace = r.trace;
    if (!r.set) {
        std::string msg = "no verified set in " + std::to_string(r.trace.attempts.size()) + " attempts; failures per attempt:";
        for (const auto& a : r.trace.attempts)
            msg += " " + std::to_string(a.failures);
        throw Error(Errc::NotFound, msg);
    }
    return std::move(*r.set);
}

// ---------------------------------------------------------------------------

unsigned pipeline_k(unsigned d, std::uint32_t q, double eps)
{
    const double k = (1.0 - eps) * ((static_cast<double>(d) - 2.0) / std::numbers::ln2) * std::log(static_cast<double>(q));
    return k <= 0.0 ? 0u : static_cast<unsigned>(std::floor(k));
}

PointSet repair_nikodym(const PointSet& base, std::vector<RepairChoice>* choices)
{
    const auto report = nikodym_check(base);
    PointSet out = base;
    if (report.ok) {
        if (choices)
            choices->clear();
        return out;
    }
    auto picked = best_repair_directions(base, report.failures);
    const Geometry& g = base.geom();
    for (const auto& c : picked)
        for (PointIndex y : g.punctured_line(c.point, c.direction))
            out.insert(y);
    if (choices)
        *choices = std::move(picked);
    return out;
}

namespace {

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void feed(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
};

} // namespace

PipelineResult quadric_pipeline(const GeomPtr& geom, const ConstructionParams& params)
{
    params.validate();
    const unsigned d = geom->dim();
    const std::uint32_t q = geom->q();
    const FieldCtx& f = geom->field();
    if (d < 3)
        throw Error(Errc::ParamError, "the quadric pipeline needs d >= 3");

    PipelineTrace tr;
    tr.k = pipeline_k(d, q, params.eps);
    if (tr.k < 1)
        throw Error(Errc::ParamError, "k = floor((1-eps)(d-2) ln q / ln 2) is zero; q too small");

    // (1) k absolutely irreducible quadrics, pairwise non-proportional.
    for (unsigned i = 0; i < tr.k; ++i) {
        CounterRng rng(params.seed, streams::kQuadricBase + i);
        int resamples = 0;
        for (;;) {
            auto s = sample_quadratic(f, d, rng, SampleMode::AbsIrreducible);
            tr.retries_used += static_cast<std::uint64_t>(s.rejections);
            const bool proportional = std::any_of(tr.quadrics.begin(), tr.quadrics.end(),
                                                  [&](const InhomQuadratic& prev) { return is_scalar_multiple(f, prev, s.poly); });
            if (!proportional) {
                tr.quadrics.push_back(std::move(s.poly));
                break;
            }
            ++tr.retries_used;
            if (++resamples >= params.max_retries)
                throw Error(Errc::SamplingFailure, "could not draw a non-proportional quadric");
        }
    }

    // (2) N'' = (F_q^d \ ∪V_i) ∪ W
    std::vector<PointSet> varieties;
    PointSet uni = PointSet::empty(geom);
    for (const auto& poly : tr.quadrics) {
        varieties.push_back(zero_locus(poly, geom));
        tr.variety_sizes.push_back(varieties.back().size());
        uni = set_union(uni, varieties.back());
    }
    for (unsigned i = 0; i < tr.k; ++i)
        for (unsigned j = i + 1; j < tr.k; ++j)
            tr.pair_intersections.push_back({i, j, set_intersection(varieties[i], varieties[j]).size()});
    tr.union_varieties_size = uni.size();

    tr.w_threshold = quantize_probability(params.eps);
    const PointSet w = sample_bernoulli(geom, params.seed, streams::kWitnessSet, tr.w_threshold);
    tr.W_size = w.size();
    tr.W_on_union_size = set_intersection(w, uni).size();
    const PointSet n2 = set_union(uni.complement(), w);
    tr.N_doubleprime_size = n2.size();

    tr.robust_threshold = std::pow(static_cast<double>(q), 1.0 + params.eps * params.eps);
    for (auto c : robust_histogram(n2))
        if (static_cast<double>(c) < tr.robust_threshold)
            ++tr.robust_deficient_points;

    // (3) thinning with keep-probability 1 − ln q / q
    tr.thinning_threshold = quantize_probability(1.0 - std::log(static_cast<double>(q)) / q);
    const PointSet keep = sample_bernoulli(geom, params.seed, streams::kThinning, tr.thinning_threshold);
    const PointSet n1 = set_intersection(n2, keep);
    tr.N_prime_size = n1.size();

    // (4) repair
    PointSet out = repair_nikodym(n1, &tr.repaired_points);
    tr.failures_before_repair = tr.repaired_points.size();
    tr.added_points_count = out.size() - n1.size();
    tr.final_size = out.size();

    Fnv1a h;
    for (const auto& poly : tr.quadrics) {
        for (auto c : poly.quad)
            h.feed(c);
        for (auto c : poly.lin)
            h.feed(c);
        h.feed(poly.cst);
    }
    for (auto wd : out.words())
        h.feed(wd);
    tr.rng_transcript_digest = h.h;

    return PipelineResult{std::move(out), std::move(tr)};
}

// ---------------------------------------------------------------------------

namespace {

void require_parabola_geometry(const Geometry& g)
{
    if (g.dim() != 2)
        throw Error(Errc::ParamError, "parabola construction lives in the plane");
    if (!validate_parabola_field(g.field()))
        throw Error(Errc::InvalidParabolaField, "needs q a perfect square with -1 a square in F_sqrt(q)");
}

// Re(y − x²)
Elem parabola_offset(const FieldCtx& f, std::span<const Elem> c)
{
    return f.re_part(f.sub(c[1], f.mul(c[0], c[0])));
}

} // namespace

PointSet parabola_base_set(const GeomPtr& geom)
{
    require_parabola_geometry(*geom);
    const FieldCtx& f = geom->field();
    PointSet s = PointSet::empty(geom);
    for (PointIndex x = 0; x < geom->num_points(); ++x)
        if (parabola_offset(f, geom->coords(x)) != 0)
            s.insert(x);
    return s;
}

ParabolaResult parabola2d(const GeomPtr& geom, const ConstructionParams& params)
{
    params.validate();
    require_parabola_geometry(*geom);
    const double q = geom->q();
    ParabolaTrace tr;

    PointSet n0 = parabola_base_set(geom);
    tr.base_size = n0.size();

    const double prob = params.c_const * std::log(q) / std::sqrt(q);
    tr.augmentation = quantize_probability(prob);
    tr.augmentation_saturated = tr.augmentation.saturated;
    PointSet n = n0;
    if (!tr.augmentation_saturated) {
        const PointSet extra = sample_bernoulli(geom, params.seed, streams::kParabola, tr.augmentation);
        n = set_union(n0, extra);
    }
    tr.augmented_count = n.size() - n0.size();

    PointSet out = repair_nikodym(n, &tr.repaired_points);
    tr.failures_before_repair = tr.repaired_points.size();
    tr.repair_added_count = out.size() - n.size();
    tr.final_size = out.size();
    return ParabolaResult{std::move(out), std::move(tr)};
}

Direction claim_i_direction(const GeomPtr& geom, PointIndex p)
{
    require_parabola_geometry(*geom);
    const FieldCtx& f = geom->field();
    const auto c = geom->coords(p);
    if (parabola_offset(f, c) != 0)
        throw Error(Errc::PrecondViolation, "point lies in N_0");
    const Elem slope = f.mul(f.from_int(2), c[0]);
    const Elem v[2] = {1, slope};
    return geom->canonical_direction(v);
}

std::vector<OneMissLine> claim_ii_witnesses(const GeomPtr& geom, PointIndex p)
{
    require_parabola_geometry(*geom);
    const FieldCtx& f = geom->field();
    const auto c = geom->coords(p);
    const Elem a = parabola_offset(f, c);
    if (a == 0)
        throw Error(Errc::PrecondViolation, "point lies outside N_0");
    const Elem two = f.from_int(2);
    const Elem target = f.neg(a);

    std::vector<OneMissLine> out;
    for (Elem t0 = 0; t0 < f.q(); ++t0) {
        if (f.re_part(f.mul(t0, t0)) != target)
            continue;
        const Elem slope = f.sub(f.mul(two, c[0]), f.mul(two, t0));
        const Elem v[2] = {1, slope};
        OneMissLine line;
        line.direction = geom->canonical_direction(v);
        line.t0 = t0;
        const Elem miss[2] = {f.sub(c[0], t0), f.sub(c[1], f.mul(slope, t0))};
        line.missing = geom->index_of(miss);
        out.push_back(std::move(line));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

Elem dot(const FieldCtx& f, std::span<const Elem> a, std::span<const Elem> b)
{
    Elem acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc = f.add(acc, f.mul(a[i], b[i]));
    return acc;
}

} // namespace

KakeyaTransformResult nikodym_to_kakeya(const PointSet& n, const std::vector<DirIndex>& witnesses)
{
    const GeomPtr& geom = n.geom_ptr();
    const Geometry& g = *geom;
    const FieldCtx& f = g.field();
    const unsigned d = g.dim();
    const std::uint32_t q = g.q();
    const std::uint32_t nd = g.num_directions();
    if (d < 2)
        throw Error(Errc::ParamError, "the transform needs d >= 2");
    if (witnesses.size() != g.num_points())
        throw Error(Errc::WitnessError, "one witness direction per point is required");
    for (PointIndex x = 0; x < g.num_points(); ++x) {
        if (witnesses[x] >= nd)
            throw Error(Errc::WitnessError, "witness ordinal out of range");
        for (PointIndex y : g.punctured_line(x, witnesses[x]))
            if (!n.contains(y))
                throw Error(Errc::WitnessError, "witness line leaves the set at point " + std::to_string(y));
    }

    KakeyaTransformTrace tr;
    tr.witness_directions = witnesses;
    tr.N_size = n.size();

    // (1) hyperplane direction ν minimizing #{x : ν·ω_x = 0}
    std::vector<std::uint64_t> hist(nd, 0);
    for (DirIndex w : witnesses)
        ++hist[w];
    std::vector<std::uint64_t> parallel(nd, 0);
#pragma omp parallel for schedule(static)
    for (std::int64_t nu = 0; nu < static_cast<std::int64_t>(nd); ++nu) {
        const auto nv = g.coords(g.direction_rep(static_cast<DirIndex>(nu)));
        std::uint64_t acc = 0;
        for (DirIndex o = 0; o < nd; ++o)
            if (hist[o] && dot(f, nv, g.coords(g.direction_rep(o))) == 0)
                acc += hist[o];
        parallel[static_cast<std::size_t>(nu)] = acc;
    }
    const auto best_nu = static_cast<DirIndex>(std::min_element(parallel.begin(), parallel.end()) - parallel.begin());
    tr.normal = g.direction(best_nu);
    tr.parallel_witness_count = parallel[best_nu];
    const auto nu = std::span<const Elem>(tr.normal.rep);

    // (2) translate {ν·x = c} containing the fewest witness lines
    std::vector<std::uint64_t> in_translate(q, 0);
    for (PointIndex x = 0; x < g.num_points(); ++x)
        if (dot(f, nu, g.coords(g.direction_rep(witnesses[x]))) == 0)
            ++in_translate[dot(f, nu, g.coords(x))];
    tr.translate = static_cast<Elem>(std::min_element(in_translate.begin(), in_translate.end()) - in_translate.begin());
    tr.exceptional_set_size = in_translate[tr.translate];

    // (3) z = T(x): the coordinates other than the pivot of ν, then ν·x − c.
    const unsigned pivot = g.direction_pivot(best_nu);
    auto transform = [&](std::span<const Elem> x, Elem shift, std::vector<Elem>& z) {
        unsigned k = 0;
        for (unsigned j = 0; j < d; ++j)
            if (j != pivot)
                z[k++] = x[j];
        z[d - 1] = f.sub(dot(f, nu, x), shift);
    };

    PointSet k = PointSet::empty(geom);
    std::vector<Elem> z(d), w(d), out(d);
    std::vector<PointIndex> exceptional;
    for (PointIndex x = 0; x < g.num_points(); ++x) {
        transform(g.coords(x), tr.translate, z);
        if (z[d - 1] == 0) {
            transform(g.coords(g.direction_rep(witnesses[x])), 0, w);
            if (w[d - 1] == 0)
                exceptional.push_back(g.index_of(z));
        }
        if (!n.contains(x) || z[d - 1] == 0)
            continue;
        // (x', t) ↦ (x'/t, 1/t)
        const Elem tinv = f.inv(z[d - 1]);
        for (unsigned j = 0; j + 1 < d; ++j)
            out[j] = f.mul(z[j], tinv);
        out[d - 1] = tinv;
        k.insert(g.index_of(out));
    }
    // F_q^{d−1} × {0}
    for (PointIndex x = 0; x < g.num_points(); ++x)
        if (g.coords(x)[d - 1] == 0)
            k.insert(x);
    // {(t·e, t) : e ∈ E, t ≠ 0}; E points already carry last coordinate 0.
    for (PointIndex e : exceptional) {
        const auto ec = g.coords(e);
        for (Elem t = 1; t < q; ++t) {
            for (unsigned j = 0; j + 1 < d; ++j)
                out[j] = f.mul(t, ec[j]);
            out[d - 1] = t;
            k.insert(g.index_of(out));
        }
    }
    tr.K_size = k.size();

    // Exact integer forms of the size bounds.
    const auto qd = static_cast<std::int64_t>(q);
    std::int64_t q_d1 = 1, q_d2 = 1;
    for (unsigned i = 0; i + 1 < d; ++i)
        q_d1 *= qd;
    for (unsigned i = 0; i + 2 < d; ++i)
        q_d2 *= qd;
    const auto e_size = static_cast<std::int64_t>(tr.exceptional_set_size);
    tr.eb_holds = e_size * (q_d1 - 1) <= (q_d2 - 1) * q_d1;
    const std::int64_t slack_num = (2 * q_d1 - q_d2 - qd) * q_d1;
    tr.kb_holds = (static_cast<std::int64_t>(tr.K_size) - static_cast<std::int64_t>(tr.N_size)) * (q_d1 - 1) <= slack_num;
    tr.eb_bound = static_cast<double>((q_d2 - 1) * q_d1) / static_cast<double>(q_d1 - 1);
    tr.bound_rhs = static_cast<double>(tr.N_size) + static_cast<double>(slack_num) / static_cast<double>(q_d1 - 1);

    tr.kakeya_ok = kakeya_check(k).ok;
    return KakeyaTransformResult{std::move(k), std::move(tr)};
}

// ---------------------------------------------------------------------------

BoundsReport known_bounds(std::uint64_t q, unsigned d)
{
    if (q < 3 || q % 2 == 0)
        throw Error(Errc::ParamError, "q must be an odd prime power");
    std::uint64_t p = 0;
    for (std::uint64_t f = 3; f <= q; f += 2)
        if (q % f == 0) {
            p = f;
            break;
        }
    std::uint64_t rest = q;
    unsigned m = 0;
    while (rest % p == 0) {
        rest /= p;
        ++m;
    }
    if (rest != 1)
        throw Error(Errc::ParamError, "q must be an odd prime power");
    if (d == 0)
        throw Error(Errc::ParamError, "dimension must be at least 1");

    BoundsReport b;
    b.q = q;
    b.d = d;
    b.perfect_square = m % 2 == 0;
    b.d_at_least_3 = d >= 3;

    std::uint64_t qd = 1;
    for (unsigned i = 0; i < d; ++i)
        qd *= q;
    b.projective_size = (qd - 1) / (q - 1);
    b.kakeya_plane_exact = q * (q + 1) / 2 + (q - 1) / 2;

    const double qf = static_cast<double>(q);
    const double df = static_cast<double>(d);
    const double root = std::sqrt(qf);
    const double s = root - std::floor(root + 1e-12);
    const double frac = s < 1e-9 ? 0.0 : s;
    b.szonyi_lower = qf * qf - qf * root - 1.0 + 0.25 * frac * (1.0 - frac) * qf;

    const double qdf = std::pow(qf, df);
    const double qd1 = std::pow(qf, df - 1.0);
    const double lnq = std::log(qf);
    b.qtor_upper_main = qdf - std::floor(df / 2.0) * std::pow(qf, df - 0.5);
    b.bukh_chao_lower = qdf / std::pow(2.0 - 1.0 / qf, df - 1.0);
    b.bukh_chao_upper_main = qdf / std::pow(2.0, df - 1.0) * (1.0 + (df + 1.0 - std::pow(2.0, 2.0 - df)) / qf);
    if (d >= 2) {
        const double qd2 = std::pow(qf, df - 2.0);
        b.nikodym_from_kakeya_lower = b.bukh_chao_lower - (2.0 * qd1 - qd2 - qf) / (qd1 - 1.0) * qd1;
    }
    b.nik_easy_main = qdf - (df - 1.0) * qd1 * lnq;
    b.nik_conj_main = qdf - ((df - 1.0) / std::numbers::ln2) * qd1 * lnq;
    b.nik_conj2_main = qdf - ((df - 2.0) / std::numbers::ln2 + 1.0) * qd1 * lnq;
    return b;
}

} // namespace nikodym
