#pragma once

// Monte Carlo harnesses with exact reference values.
// Trial t always draws from derive_seed(seed, t), so aggregates do not
// depend on the thread count.

#include "nikodym/field.hpp"
#include "nikodym/geometry.hpp"
#include "nikodym/quadrics.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace nikodym {

struct DerangementStats {
    unsigned D = 0;
    std::uint32_t q = 0;
    std::uint64_t trials = 0;
    std::uint64_t rootless = 0;
    double rootless_fraction = 0.0;
    double delta_D = 0.0;        // Σ_{j≤D} (−1)^j / j!
    double exact_fraction = 0.0; // Σ_{j≤D} (−1)^j C(q, j) / q^j
};

double derangement_density(unsigned D);
double rootless_monic_fraction(std::uint32_t q, unsigned D);

/// Monic degree-D polynomials with uniform lower coefficients. Throws CharTooSmall for D ≥ p.
DerangementStats derangement_experiment(const FieldCtx& f, unsigned D, std::uint64_t trials, std::uint64_t seed);

enum class MomentMode { Unconstrained, ExcludePerfectSquares };

struct MomentStats {
    std::uint32_t q = 0;
    unsigned d = 0;
    unsigned k = 0;
    std::uint64_t trials = 0;
    MomentMode mode = MomentMode::Unconstrained;
    double sample_mean = 0.0;
    double sample_variance = 0.0;
    double exact_mean = 0.0;     // |FP| ρ^k, ρ = (q−1)/(2q)
    double exact_variance = 0.0; // |FP| ρ^k (1 − ρ^k)
    std::vector<std::uint32_t> sizes;
};

MomentStats moments_experiment(const GeomPtr& geom, unsigned k, std::uint64_t trials, MomentMode mode,
                               std::uint64_t seed);

using JointTable = std::vector<std::uint64_t>; // q×q, row = H(ω)

/// Tabulates (H(ω), H(ω′)) over every homogeneous quadratic. Throws
/// PrecondViolation when ω = ω′ and CapacityExceeded past 10^6 forms.
JointTable pairwise_independence_bruteforce(const GeomPtr& geom, DirIndex omega, DirIndex omega_prime);

struct LangWeilStats {
    std::uint64_t trials = 0;
    std::uint64_t min_size = 0;
    std::uint64_t max_size = 0;
    double mean_size = 0.0;
    double center = 0.0;    // q^{d−1}
    double envelope = 0.0;  // 5 q^{d−3/2}
    std::uint64_t outside_envelope = 0;
    std::uint64_t rejections = 0;
    std::vector<std::uint64_t> sizes;
};

LangWeilStats lang_weil_experiment(const GeomPtr& geom, std::uint64_t trials, std::uint64_t seed);

struct IrreducibleStats {
    std::uint64_t trials = 0;
    std::uint64_t irreducible = 0;
    double fraction = 0.0;
};

IrreducibleStats irreducible_fraction_experiment(const GeomPtr& geom, std::uint64_t trials, std::uint64_t seed);

/// Exhaustive count over all q^{(d+1)(d+2)/2} quadratics (capped at 10^7).
IrreducibleStats irreducible_fraction_exact(const FieldCtx& f, unsigned d);

} // namespace nikodym
