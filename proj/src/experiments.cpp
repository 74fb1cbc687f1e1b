#include "nikodym/experiments.hpp"

#include "nikodym/error.hpp"
#include "nikodym/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nikodym {

double derangement_density(unsigned D)
{
    double sum = 0.0, term = 1.0;
    for (unsigned j = 0; j <= D; ++j) {
        if (j > 0)
            term /= static_cast<double>(j);
        sum += (j % 2 == 0 ? term : -term);
    }
    return sum;
}

double rootless_monic_fraction(std::uint32_t q, unsigned D)
{
    // C(q, j)/q^j built incrementally: ratio (q − j + 1)/(j q).
    double sum = 0.0, term = 1.0;
    for (unsigned j = 0; j <= D; ++j) {
        if (j > 0)
            term *= (static_cast<double>(q) - j + 1) / (static_cast<double>(j) * q);
        sum += (j % 2 == 0 ? term : -term);
    }
    return sum;
}

DerangementStats derangement_experiment(const FieldCtx& f, unsigned D, std::uint64_t trials, std::uint64_t seed)
{
    if (D == 0 || D >= f.p())
        throw Error(Errc::CharTooSmall, "degree must be positive and below the characteristic");
    DerangementStats st;
    st.D = D;
    st.q = f.q();
    st.trials = trials;
    st.delta_D = derangement_density(D);
    st.exact_fraction = rootless_monic_fraction(f.q(), D);

    std::uint64_t rootless = 0;
    const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel reduction(+ : rootless)
    {
        std::vector<Elem> coeffs(D + 1);
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < n; ++t) {
            CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(t)), streams::kExperiment);
            for (unsigned i = 0; i < D; ++i)
                coeffs[i] = static_cast<Elem>(rng.uniform(f.q()));
            coeffs[D] = 1;
            bool has_root = false;
            for (Elem x = 0; x < f.q() && !has_root; ++x) {
                Elem acc = 0;
                for (unsigned i = D + 1; i-- > 0;)
                    acc = f.add(f.mul(acc, x), coeffs[i]);
                has_root = acc == 0;
            }
            if (!has_root)
                ++rootless;
        }
    }
    st.rootless = rootless;
    st.rootless_fraction = trials ? static_cast<double>(rootless) / static_cast<double>(trials) : 0.0;
    return st;
}

MomentStats moments_experiment(const GeomPtr& geom, unsigned k, std::uint64_t trials, MomentMode mode,
                               std::uint64_t seed)
{
    const FieldCtx& f = geom->field();
    const unsigned d = geom->dim();
    MomentStats st;
    st.q = f.q();
    st.d = d;
    st.k = k;
    st.trials = trials;
    st.mode = mode;
    const double rho = std::pow((static_cast<double>(f.q()) - 1.0) / (2.0 * f.q()), static_cast<double>(k));
    st.exact_mean = geom->num_directions() * rho;
    st.exact_variance = geom->num_directions() * rho * (1.0 - rho);
    st.sizes.assign(trials, 0);

    const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t t = 0; t < n; ++t) {
        CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(t)), streams::kExperiment);
        std::vector<std::uint8_t> alive(geom->num_directions(), 1);
        for (unsigned i = 0; i < k; ++i) {
            HomQuadratic h = sample_homogeneous(f, d, rng);
            if (mode == MomentMode::ExcludePerfectSquares)
                while (is_perfect_square_abs(f, h))
                    h = sample_homogeneous(f, d, rng);
            for (DirIndex o = 0; o < geom->num_directions(); ++o)
                if (alive[o] && !f.is_nonresidue(eval(f, h, geom->coords(geom->direction_rep(o)))))
                    alive[o] = 0;
        }
        st.sizes[static_cast<std::size_t>(t)] =
            static_cast<std::uint32_t>(std::count(alive.begin(), alive.end(), std::uint8_t{1}));
    }

    if (trials > 0) {
        double sum = 0.0;
        for (auto s : st.sizes)
            sum += s;
        st.sample_mean = sum / static_cast<double>(trials);
        double ss = 0.0;
        for (auto s : st.sizes)
            ss += (s - st.sample_mean) * (s - st.sample_mean);
        st.sample_variance = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;
    }
    return st;
}

JointTable pairwise_independence_bruteforce(const GeomPtr& geom, DirIndex omega, DirIndex omega_prime)
{
    if (omega == omega_prime)
        throw Error(Errc::PrecondViolation, "directions must be distinct");
    const FieldCtx& f = geom->field();
    const unsigned d = geom->dim();
    const std::size_t slots = num_pairs(d);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < slots; ++i) {
        total *= f.q();
        if (total > 1'000'000)
            throw Error(Errc::CapacityExceeded, "too many homogeneous quadratics to enumerate");
    }
    const auto v = geom->coords(geom->direction_rep(omega));
    const auto w = geom->coords(geom->direction_rep(omega_prime));
    JointTable table(std::size_t{f.q()} * f.q(), 0);
    HomQuadratic h = HomQuadratic::zero(d);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rest = code;
        for (auto& c : h.coeffs) {
            c = static_cast<Elem>(rest % f.q());
            rest /= f.q();
        }
        ++table[std::size_t{eval(f, h, v)} * f.q() + eval(f, h, w)];
    }
    return table;
}

LangWeilStats lang_weil_experiment(const GeomPtr& geom, std::uint64_t trials, std::uint64_t seed)
{
    if (geom->dim() < 2)
        throw Error(Errc::ParamError, "needs d >= 2");
    const FieldCtx& f = geom->field();
    LangWeilStats st;
    st.trials = trials;
    st.center = std::pow(static_cast<double>(f.q()), geom->dim() - 1.0);
    st.envelope = 5.0 * std::pow(static_cast<double>(f.q()), geom->dim() - 1.5);
    st.sizes.resize(trials);
    std::vector<int> rejections(trials, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        CounterRng rng(derive_seed(seed, t), streams::kExperiment);
        auto s = sample_quadratic(f, geom->dim(), rng, SampleMode::AbsIrreducible);
        rejections[t] = s.rejections;
        st.sizes[t] = zero_locus(s.poly, geom).size();
    }
    if (trials > 0) {
        st.min_size = *std::min_element(st.sizes.begin(), st.sizes.end());
        st.max_size = *std::max_element(st.sizes.begin(), st.sizes.end());
        st.mean_size = std::accumulate(st.sizes.begin(), st.sizes.end(), 0.0) / static_cast<double>(trials);
    }
    for (auto s : st.sizes)
        if (std::abs(static_cast<double>(s) - st.center) > st.envelope)
            ++st.outside_envelope;
    st.rejections = static_cast<std::uint64_t>(std::accumulate(rejections.begin(), rejections.end(), 0));
    return st;
}

IrreducibleStats irreducible_fraction_experiment(const GeomPtr& geom, std::uint64_t trials, std::uint64_t seed)
{
    const FieldCtx& f = geom->field();
    IrreducibleStats st;
    st.trials = trials;
    std::uint64_t hits = 0;
    const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (std::int64_t t = 0; t < n; ++t) {
        CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(t)), streams::kExperiment);
        if (is_absolutely_irreducible(f, sample_quadratic(f, geom->dim(), rng, SampleMode::Uniform).poly))
            ++hits;
    }
    st.irreducible = hits;
    st.fraction = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    return st;
}

IrreducibleStats irreducible_fraction_exact(const FieldCtx& f, unsigned d)
{
    InhomQuadratic poly = InhomQuadratic::zero(d);
    const std::size_t slots = poly.coefficient_count();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < slots; ++i) {
        total *= f.q();
        if (total > 10'000'000)
            throw Error(Errc::CapacityExceeded, "too many quadratics to enumerate");
    }
    IrreducibleStats st;
    st.trials = total;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rest = code;
        for (auto& c : poly.quad) {
            c = static_cast<Elem>(rest % f.q());
            rest /= f.q();
        }
        for (auto& c : poly.lin) {
            c = static_cast<Elem>(rest % f.q());
            rest /= f.q();
        }
        poly.cst = static_cast<Elem>(rest % f.q());
        if (is_absolutely_irreducible(f, poly))
            ++st.irreducible;
    }
    st.fraction = static_cast<double>(st.irreducible) / static_cast<double>(total);
    return st;
}

} // namespace nikodym
