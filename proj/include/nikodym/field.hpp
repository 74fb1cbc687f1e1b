#pragma once

// Table-driven arithmetic in F_q, q = p^m odd.
//
// Elements are indices in [0, q): the element a_0 + a_1 α + ... + a_{m-1} α^{m-1}
// has index a_0 + a_1 p + ... + a_{m-1} p^{m-1}, where α is a root of the
// field modulus. Index 0 is zero and index 1 is one.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace nikodym {

using Elem = std::uint32_t;

inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kFullTableOrder = std::uint64_t{1} << 10;

struct FieldSpec {
    std::uint64_t p = 0;
    unsigned m = 0;
    std::vector<std::uint64_t> modulus; // low degree first, monic, size m+1

    bool operator==(const FieldSpec&) const = default;
};

class FieldCtx;

/// Structure of F_q over its subfield F_√q (m even): F_q = F_√q ⊕ F_√q·√c.
struct SubfieldCtx {
    std::uint32_t sqrt_q = 0;
    std::shared_ptr<const FieldCtx> field;  // F_√q with its own canonical modulus
    std::vector<Elem> embed;                // F_√q index -> F_q index
    Elem c = 0;                             // embedded smallest non-residue of F_√q
    Elem sqrt_c = 0;
    bool minus_one_is_square_in_subfield = false;
    std::vector<Elem> re;                   // x = re[x] + im[x]·√c, both embedded
    std::vector<Elem> im;
};

class FieldCtx {
public:
    /// Canonical field: modulus is the lexicographically smallest monic
    /// irreducible of degree m, compared coefficient a_0 first.
    static std::shared_ptr<const FieldCtx> build(std::uint64_t p, unsigned m);

    /// Field with an explicit modulus (used when loading foreign set files).
    static std::shared_ptr<const FieldCtx> build_with_modulus(std::uint64_t p,
                                                             std::vector<std::uint64_t> modulus);

    const FieldSpec& spec() const noexcept { return spec_; }
    std::uint64_t p() const noexcept { return spec_.p; }
    unsigned m() const noexcept { return spec_.m; }
    std::uint32_t q() const noexcept { return q_; }
    bool canonical_modulus() const noexcept { return canonical_; }

    Elem add(Elem a, Elem b) const noexcept
    {
        if (!add_tab_.empty())
            return add_tab_[std::size_t{a} * q_ + b];
        if (spec_.m == 1) {
            Elem s = a + b;
            return s >= q_ ? s - q_ : s;
        }
        return add_digits(a, b);
    }

    Elem neg(Elem a) const noexcept { return neg_[a]; }
    Elem sub(Elem a, Elem b) const noexcept { return add(a, neg_[b]); }

    Elem mul(Elem a, Elem b) const noexcept
    {
        if (!mul_tab_.empty())
            return mul_tab_[std::size_t{a} * q_ + b];
        if (a == 0 || b == 0)
            return 0;
        return exp_[log_[a] + log_[b]];
    }

    /// Throws DivisionByZero on 0.
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const noexcept;

    /// Image of an integer under Z -> F_p ⊂ F_q.
    Elem from_int(std::int64_t v) const noexcept;

    Elem generator() const noexcept { return exp_[1]; }

    /// 0 counts as a square.
    bool is_square(Elem a) const noexcept { return square_[a] != 0; }
    bool is_nonresidue(Elem a) const noexcept { return square_[a] == 0; }

    /// Canonical root: smaller index of the ± pair; empty for non-residues.
    std::optional<Elem> sqrt(Elem a) const noexcept
    {
        if (!square_[a])
            return std::nullopt;
        return sqrt_[a];
    }

    std::vector<std::uint64_t> digits(Elem a) const;
    Elem from_digits(std::span<const std::uint64_t> digits) const;

    const SubfieldCtx* subfield() const noexcept { return subfield_.get(); }

    /// Re(a + b√c) = a. Throws SubfieldRequired when m is odd.
    Elem re_part(Elem x) const;

private:
    FieldCtx() = default;
    void init_tables();
    void init_subfield();
    Elem add_digits(Elem a, Elem b) const noexcept;

    FieldSpec spec_;
    std::uint32_t q_ = 0;
    bool canonical_ = true;

    std::vector<Elem> add_tab_;
    std::vector<Elem> mul_tab_;
    std::vector<Elem> neg_;
    std::vector<std::uint32_t> log_;
    std::vector<Elem> exp_; // length 2(q-1), so exp_[log a + log b] needs no reduction
    std::vector<std::uint8_t> square_;
    std::vector<Elem> sqrt_;
    std::unique_ptr<SubfieldCtx> subfield_;
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

inline FieldPtr build_field(std::uint64_t p, unsigned m) { return FieldCtx::build(p, m); }

/// True iff m is even and -1 is a square in F_√q.
bool validate_parabola_field(const FieldCtx& field) noexcept;

bool is_prime(std::uint64_t n) noexcept;

/// Exhaustive trial division by all monic polynomials of degree ≤ deg/2.
bool is_irreducible(std::span<const std::uint64_t> monic_poly, std::uint64_t p);

std::vector<std::uint64_t> canonical_modulus(std::uint64_t p, unsigned m);

} // namespace nikodym
