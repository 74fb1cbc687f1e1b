#include "nikodym/field.hpp"

#include "nikodym/error.hpp"

#include <algorithm>
#include <string>

namespace nikodym {

namespace {

using Poly = std::vector<std::uint64_t>;

// a·b mod (monic) modulus, all coefficient vectors of length m over F_p.
Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& modulus, std::uint64_t p)
{
    const std::size_t m = modulus.size() - 1;
    Poly prod(2 * m - 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < m; ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    for (std::size_t k = prod.size(); k-- > m;) {
        const std::uint64_t c = prod[k];
        if (c == 0)
            continue;
        prod[k] = 0;
        // x^m = -(modulus_0 + ... + modulus_{m-1} x^{m-1})
        for (std::size_t i = 0; i < m; ++i)
            prod[k - m + i] = (prod[k - m + i] + (p - c) * modulus[i]) % p;
    }
    prod.resize(m);
    return prod;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& modulus, std::uint64_t p)
{
    Poly result(modulus.size() - 1, 0);
    result[0] = 1;
    while (e > 0) {
        if (e & 1)
            result = poly_mulmod(result, base, modulus, p);
        base = poly_mulmod(base, base, modulus, p);
        e >>= 1;
    }
    return result;
}

// Remainder of num modulo a monic divisor; true if it is zero.
bool divides(const Poly& divisor, Poly num, std::uint64_t p)
{
    const std::size_t dd = divisor.size() - 1;
    for (std::size_t k = num.size(); k-- > dd;) {
        const std::uint64_t c = num[k];
        if (c == 0)
            continue;
        for (std::size_t i = 0; i <= dd; ++i)
            num[k - dd + i] = (num[k - dd + i] + (p - c) * divisor[i]) % p;
    }
    return std::all_of(num.begin(), num.begin() + static_cast<std::ptrdiff_t>(dd),
                       [](std::uint64_t c) { return c == 0; });
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0)
                n /= f;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

Poly to_poly(std::uint64_t index, std::uint64_t p, unsigned m)
{
    Poly d(m, 0);
    for (unsigned i = 0; i < m; ++i) {
        d[i] = index % p;
        index /= p;
    }
    return d;
}

std::uint64_t from_poly(const Poly& d, std::uint64_t p)
{
    std::uint64_t idx = 0;
    for (std::size_t i = d.size(); i-- > 0;)
        idx = idx * p + d[i];
    return idx;
}

} // namespace

bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2)
        return false;
    for (std::uint64_t f = 2; f * f <= n; ++f)
        if (n % f == 0)
            return false;
    return true;
}

bool is_irreducible(std::span<const std::uint64_t> monic_poly, std::uint64_t p)
{
    const std::size_t n = monic_poly.size() - 1;
    if (n == 0)
        return false;
    const Poly poly(monic_poly.begin(), monic_poly.end());
    for (std::size_t k = 1; k <= n / 2; ++k) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < k; ++i)
            count *= p;
        for (std::uint64_t c = 0; c < count; ++c) {
            Poly divisor = to_poly(c, p, static_cast<unsigned>(k));
            divisor.push_back(1);
            if (divides(divisor, poly, p))
                return false;
        }
    }
    return true;
}

std::vector<std::uint64_t> canonical_modulus(std::uint64_t p, unsigned m)
{
    std::uint64_t count = 1;
    for (unsigned i = 0; i < m; ++i)
        count *= p;
    // a_0 is the most significant key, so it is the slowest-moving digit.
    for (std::uint64_t n = 0; n < count; ++n) {
        Poly poly(m + 1, 0);
        std::uint64_t rest = n;
        for (unsigned i = m; i-- > 0;) {
            poly[i] = rest % p;
            rest /= p;
        }
        poly[m] = 1;
        if (is_irreducible(poly, p))
            return poly;
    }
    throw Error(Errc::InvalidField, "no irreducible polynomial found");
}

std::shared_ptr<const FieldCtx> FieldCtx::build(std::uint64_t p, unsigned m)
{
    if (m == 0)
        throw Error(Errc::InvalidField, "extension degree must be at least 1");
    if (p < 3 || !is_prime(p))
        throw Error(Errc::InvalidField, "characteristic must be an odd prime, got " + std::to_string(p));
    std::uint64_t q = 1;
    for (unsigned i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxFieldOrder)
            throw Error(Errc::CapacityExceeded, "field order exceeds 2^20");
    }
    return build_with_modulus(p, nikodym::canonical_modulus(p, m));
}

std::shared_ptr<const FieldCtx> FieldCtx::build_with_modulus(std::uint64_t p,
                                                            std::vector<std::uint64_t> modulus)
{
    if (p < 3 || !is_prime(p))
        throw Error(Errc::InvalidField, "characteristic must be an odd prime, got " + std::to_string(p));
    if (modulus.size() < 2 || modulus.back() != 1)
        throw Error(Errc::InvalidField, "modulus must be monic of degree >= 1");
    const unsigned m = static_cast<unsigned>(modulus.size() - 1);
    std::uint64_t q = 1;
    for (unsigned i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxFieldOrder)
            throw Error(Errc::CapacityExceeded, "field order exceeds 2^20");
    }
    for (auto c : modulus)
        if (c >= p)
            throw Error(Errc::InvalidField, "modulus coefficient out of range");
    if (!is_irreducible(modulus, p))
        throw Error(Errc::InvalidField, "modulus is reducible");

    std::shared_ptr<FieldCtx> ctx(new FieldCtx());
    ctx->spec_ = FieldSpec{p, m, std::move(modulus)};
    ctx->q_ = static_cast<std::uint32_t>(q);
    ctx->canonical_ = ctx->spec_.modulus == nikodym::canonical_modulus(p, m);
    ctx->init_tables();
    if (m % 2 == 0)
        ctx->init_subfield();
    return ctx;
}

Elem FieldCtx::add_digits(Elem a, Elem b) const noexcept
{
    const std::uint64_t p = spec_.p;
    std::uint64_t out = 0, scale = 1;
    std::uint64_t x = a, y = b;
    for (unsigned i = 0; i < spec_.m; ++i) {
        out += ((x % p + y % p) % p) * scale;
        x /= p;
        y /= p;
        scale *= p;
    }
    return static_cast<Elem>(out);
}

void FieldCtx::init_tables()
{
    const std::uint64_t p = spec_.p;
    const unsigned m = spec_.m;
    const std::uint32_t q = q_;

    neg_.resize(q);
    for (Elem a = 0; a < q; ++a) {
        Poly d = to_poly(a, p, m);
        for (auto& c : d)
            c = (p - c) % p;
        neg_[a] = static_cast<Elem>(from_poly(d, p));
    }

    // Primitive element: smallest index whose order is exactly q-1.
    const auto factors = prime_factors(q - 1);
    Poly gen;
    for (std::uint64_t cand = 1; cand < q; ++cand) {
        Poly g = to_poly(cand, p, m);
        bool primitive = true;
        for (auto r : factors) {
            Poly t = poly_powmod(g, (q - 1) / r, spec_.modulus, p);
            if (from_poly(t, p) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            gen = std::move(g);
            break;
        }
    }

    log_.assign(q, 0);
    exp_.assign(2 * std::size_t{q - 1}, 0);
    Poly cur(m, 0);
    cur[0] = 1;
    for (std::uint32_t k = 0; k < q - 1; ++k) {
        const auto idx = static_cast<Elem>(from_poly(cur, p));
        exp_[k] = idx;
        exp_[k + q - 1] = idx;
        log_[idx] = k;
        cur = poly_mulmod(cur, gen, spec_.modulus, p);
    }

    if (q <= kFullTableOrder) {
        add_tab_.resize(std::size_t{q} * q);
        mul_tab_.resize(std::size_t{q} * q);
        for (Elem a = 0; a < q; ++a) {
            for (Elem b = 0; b < q; ++b) {
                add_tab_[std::size_t{a} * q + b] = add_digits(a, b);
                mul_tab_[std::size_t{a} * q + b] = (a == 0 || b == 0) ? 0 : exp_[log_[a] + log_[b]];
            }
        }
    }

    square_.assign(q, 0);
    sqrt_.assign(q, 0);
    for (Elem y = 0; y < q; ++y) {
        const Elem s = mul(y, y);
        square_[s] = 1;
        sqrt_[s] = std::min(y, neg_[y]);
    }
}

void FieldCtx::init_subfield()
{
    auto sub = std::make_unique<SubfieldCtx>();
    sub->field = build(spec_.p, spec_.m / 2);
    const FieldCtx& small = *sub->field;
    sub->sqrt_q = small.q();

    // Embed via the smallest-index root of the subfield's modulus.
    const auto& fsub = small.spec().modulus;
    Elem beta = 0;
    bool found = false;
    for (Elem x = 0; x < q_ && !found; ++x) {
        Elem acc = 0;
        for (std::size_t i = fsub.size(); i-- > 0;)
            acc = add(mul(acc, x), from_int(static_cast<std::int64_t>(fsub[i])));
        if (acc == 0) {
            beta = x;
            found = true;
        }
    }
    if (!found)
        throw Error(Errc::InvalidField, "subfield modulus has no root in F_q");

    sub->embed.resize(small.q());
    for (Elem a = 0; a < small.q(); ++a) {
        const auto d = small.digits(a);
        Elem acc = 0, power = 1;
        for (auto coeff : d) {
            acc = add(acc, mul(from_int(static_cast<std::int64_t>(coeff)), power));
            power = mul(power, beta);
        }
        sub->embed[a] = acc;
    }

    Elem c_small = 1;
    while (small.is_square(c_small))
        ++c_small;
    sub->c = sub->embed[c_small];
    sub->sqrt_c = *sqrt(sub->c);
    sub->minus_one_is_square_in_subfield = small.is_square(small.neg(1));

    sub->re.assign(q_, 0);
    sub->im.assign(q_, 0);
    std::vector<std::uint8_t> seen(q_, 0);
    for (Elem a = 0; a < small.q(); ++a) {
        for (Elem b = 0; b < small.q(); ++b) {
            const Elem x = add(sub->embed[a], mul(sub->embed[b], sub->sqrt_c));
            if (seen[x])
                throw Error(Errc::InvalidField, "decomposition over subfield is not unique");
            seen[x] = 1;
            sub->re[x] = sub->embed[a];
            sub->im[x] = sub->embed[b];
        }
    }
    subfield_ = std::move(sub);
}

Elem FieldCtx::inv(Elem a) const
{
    if (a == 0)
        throw Error(Errc::DivisionByZero, "inverse of zero");
    const std::uint32_t l = log_[a];
    return exp_[l == 0 ? 0 : (q_ - 1) - l];
}

Elem FieldCtx::pow(Elem a, std::uint64_t e) const noexcept
{
    if (a == 0)
        return e == 0 ? 1 : 0;
    const std::uint64_t order = q_ - 1;
    return exp_[(std::uint64_t{log_[a]} * (e % order)) % order];
}

Elem FieldCtx::from_int(std::int64_t v) const noexcept
{
    const auto p = static_cast<std::int64_t>(spec_.p);
    std::int64_t r = v % p;
    if (r < 0)
        r += p;
    return static_cast<Elem>(r);
}

std::vector<std::uint64_t> FieldCtx::digits(Elem a) const { return to_poly(a, spec_.p, spec_.m); }

Elem FieldCtx::from_digits(std::span<const std::uint64_t> d) const
{
    std::uint64_t idx = 0;
    for (std::size_t i = d.size(); i-- > 0;)
        idx = idx * spec_.p + d[i] % spec_.p;
    return static_cast<Elem>(idx);
}

Elem FieldCtx::re_part(Elem x) const
{
    if (!subfield_)
        throw Error(Errc::SubfieldRequired, "Re requires an even extension degree");
    return subfield_->re[x];
}

bool validate_parabola_field(const FieldCtx& field) noexcept
{
    const auto* sub = field.subfield();
    return sub != nullptr && sub->minus_one_is_square_in_subfield;
}

} // namespace nikodym
