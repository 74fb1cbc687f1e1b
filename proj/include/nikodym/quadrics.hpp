#pragma once

// Quadratic polynomials on F_q^d (q odd).
//
// Upper-triangular coefficients are stored row-major over pairs a ≤ b:
// (0,0), (0,1), ..., (0,d-1), (1,1), ..., (d-1,d-1).

#include "nikodym/field.hpp"
#include "nikodym/geometry.hpp"
#include "nikodym/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace nikodym {

inline std::size_t num_pairs(unsigned d) noexcept { return std::size_t{d} * (d + 1) / 2; }

/// Slot of q_{ab} (a ≤ b) in the upper-triangular layout.
inline std::size_t pair_slot(unsigned a, unsigned b, unsigned d) noexcept
{
    return std::size_t{a} * d - std::size_t{a} * (a + 1) / 2 + b;
}

/// Σ q_ab x_a x_b + Σ l_a x_a + c
struct InhomQuadratic {
    unsigned d = 0;
    std::vector<Elem> quad;
    std::vector<Elem> lin;
    Elem cst = 0;

    static InhomQuadratic zero(unsigned d);
    std::size_t coefficient_count() const noexcept { return quad.size() + lin.size() + 1; }
    bool operator==(const InhomQuadratic&) const = default;
};

/// Σ c_ab v_a v_b
struct HomQuadratic {
    unsigned d = 0;
    std::vector<Elem> coeffs;

    static HomQuadratic zero(unsigned d);
    bool operator==(const HomQuadratic&) const = default;
};

Elem eval(const FieldCtx& f, const InhomQuadratic& q, std::span<const Elem> x);
Elem eval(const FieldCtx& f, const HomQuadratic& h, std::span<const Elem> v);

enum class SampleMode { Uniform, UnitConstant, AbsIrreducible };

inline constexpr int kMaxSampleTries = 64;

struct SampledQuadratic {
    InhomQuadratic poly;
    int rejections = 0;
};

/// Draws coefficients in layout order (quad, lin, const) from the stream.
SampledQuadratic sample_quadratic(const FieldCtx& f, unsigned d, CounterRng& rng, SampleMode mode);

HomQuadratic sample_homogeneous(const FieldCtx& f, unsigned d, CounterRng& rng);

/// Rank of a dense square matrix over F_q (row-major, n×n).
unsigned matrix_rank(const FieldCtx& f, std::vector<Elem> m, unsigned n);

/// (d+1)×(d+1) matrix [[A, b/2], [bᵀ/2, c]] of the homogenized form.
std::vector<Elem> augmented_matrix(const FieldCtx& f, const InhomQuadratic& q);

/// deg Q = 2 and the homogenized form has rank ≥ 3.
bool is_absolutely_irreducible(const FieldCtx& f, const InhomQuadratic& q);

/// L(v)² − 4·quad(v). Throws NotNormalized unless cst = 1.
HomQuadratic discriminant(const FieldCtx& f, const InhomQuadratic& q);

/// H = C(v)² over the algebraic closure ⇔ symmetric matrix of H has rank ≤ 1.
bool is_perfect_square_abs(const FieldCtx& f, const HomQuadratic& h);

/// True when q2 = λ·q1 for some λ ≠ 0 (or both are zero).
bool is_scalar_multiple(const FieldCtx& f, const InhomQuadratic& q1, const InhomQuadratic& q2);

InhomQuadratic scaled(const FieldCtx& f, const InhomQuadratic& q, Elem lambda);

PointSet zero_locus(const InhomQuadratic& q, const GeomPtr& geom);

enum class AvoidCase { NoRealRoot, HasRoot, Tangent, DegenerateConstant };

const char* avoid_case_name(AvoidCase c) noexcept;

struct AvoidanceVerdict {
    bool avoids = false;
    AvoidCase kind = AvoidCase::HasRoot;
};

/// Whether ℓ*_{0,ω} misses {Q = 0}. Throws PrecondViolation if Q(0) = 0.
AvoidanceVerdict direction_avoids(const FieldCtx& f, const InhomQuadratic& q, std::span<const Elem> omega);

/// E = {ω : H(ω) is a non-residue}; 0 is a square, so H(ω) = 0 is excluded.
DirectionSet nonresidue_direction_set(const HomQuadratic& h, const GeomPtr& geom);

/// {ω : direction_avoids(Q, ω)}, the geometric count including degenerate-constant lines.
DirectionSet avoidance_direction_set(const InhomQuadratic& q, const GeomPtr& geom);

} // namespace nikodym
