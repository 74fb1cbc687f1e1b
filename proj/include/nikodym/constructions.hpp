#pragma once

#include "nikodym/geometry.hpp"
#include "nikodym/quadrics.hpp"
#include "nikodym/rng.hpp"
#include "nikodym/verify.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nikodym {

struct ConstructionParams {
    double eps = 0.1;
    double c_const = 2.5;
    std::uint64_t seed = 0;
    int max_retries = 16;

    /// Throws ParamError unless eps ∈ (0, 1/2), C > 2 and max_retries ≥ 1.
    void validate() const;
};

/// Points x with rng_word(seed, stream, x) under the threshold.
PointSet sample_bernoulli(const GeomPtr& geom, std::uint64_t seed, std::uint64_t stream, const Threshold& t);

// ---------------------------------------------------------------------------
// Purely random construction.

struct RandomAttempt {
    int attempt = 0;
    std::uint64_t sub_seed = 0;
    std::uint64_t size = 0;
    std::uint64_t failures = 0;
};

struct RandomTrace {
    Threshold inclusion;
    std::vector<RandomAttempt> attempts;
};

struct RandomResult {
    std::optional<PointSet> set; // first verified attempt, if any
    RandomTrace trace;
};

/// Inclusion probability 1 − (d−1+ε) ln q / q; throws ParamError outside (0, 1).
double random_inclusion_probability(unsigned d, std::uint32_t q, double eps);

/// Runs up to max_retries verified attempts without throwing on failure.
RandomResult random_nikodym_attempts(const GeomPtr& geom, const ConstructionParams& params);

/// As above, but throws NotFound when no attempt verifies.
PointSet random_nikodym(const GeomPtr& geom, const ConstructionParams& params, RandomTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Quadric deletion pipeline (d ≥ 3).

struct PairIntersection {
    unsigned i = 0;
    unsigned j = 0;
    std::uint64_t size = 0;
};

struct PipelineTrace {
    unsigned k = 0;
    std::vector<InhomQuadratic> quadrics;
    std::vector<std::uint64_t> variety_sizes;
    std::vector<PairIntersection> pair_intersections;
    std::uint64_t union_varieties_size = 0;
    std::uint64_t W_size = 0;
    std::uint64_t W_on_union_size = 0;
    std::uint64_t N_doubleprime_size = 0;
    std::uint64_t N_prime_size = 0;
    Threshold w_threshold;
    Threshold thinning_threshold;
    double robust_threshold = 0.0;            // q^{1+ε²}
    std::uint64_t robust_deficient_points = 0; // points of F_q^d below it in N''
    std::uint64_t failures_before_repair = 0;
    std::vector<RepairChoice> repaired_points;
    std::uint64_t added_points_count = 0;
    std::uint64_t final_size = 0;
    std::uint64_t retries_used = 0;
    std::uint64_t rng_transcript_digest = 0;
};

struct PipelineResult {
    PointSet set;
    PipelineTrace trace;
};

/// k = ⌊(1−ε)·((d−2)/ln 2)·ln q⌋
unsigned pipeline_k(unsigned d, std::uint32_t q, double eps);

PipelineResult quadric_pipeline(const GeomPtr& geom, const ConstructionParams& params);

/// Adds the missing points of the cheapest punctured line through every
/// point of `base` that has none; choices are made against `base`.
PointSet repair_nikodym(const PointSet& base, std::vector<RepairChoice>* choices = nullptr);

// ---------------------------------------------------------------------------
// Planar parabola construction (q an odd perfect square, −1 a square in F_√q).

/// N_0 = {(x, y) : Re(y − x²) ≠ 0}
PointSet parabola_base_set(const GeomPtr& geom);

struct ParabolaTrace {
    std::uint64_t base_size = 0;
    Threshold augmentation;
    bool augmentation_saturated = false; // C ln q / √q ≥ 1: augmentation skipped
    std::uint64_t augmented_count = 0;
    std::uint64_t failures_before_repair = 0;
    std::vector<RepairChoice> repaired_points;
    std::uint64_t repair_added_count = 0;
    std::uint64_t final_size = 0;
};

struct ParabolaResult {
    PointSet set;
    ParabolaTrace trace;
};

ParabolaResult parabola2d(const GeomPtr& geom, const ConstructionParams& params);

/// Point outside N_0: the slope-2x_0 direction whose punctured line lies in N_0.
Direction claim_i_direction(const GeomPtr& geom, PointIndex p);

struct OneMissLine {
    Direction direction;
    Elem t0 = 0;
    PointIndex missing = 0;
};

/// Point of N_0: for each t_0 with Re(t_0²) = −Re(y_0 − x_0²), slope
/// m = 2x_0 − 2t_0 and the single point of ℓ*_{p,[1,m]} outside N_0,
/// reached at parameter t = −t_0.
std::vector<OneMissLine> claim_ii_witnesses(const GeomPtr& geom, PointIndex p);

// ---------------------------------------------------------------------------
// Nikodym → Kakeya transform.

struct KakeyaTransformTrace {
    Direction normal;
    Elem translate = 0;
    std::uint64_t parallel_witness_count = 0; // x with ω_x parallel to the chosen hyperplane
    std::uint64_t exceptional_set_size = 0;
    std::vector<DirIndex> witness_directions;
    std::uint64_t N_size = 0;
    std::uint64_t K_size = 0;
    double eb_bound = 0.0;
    double bound_rhs = 0.0;
    bool eb_holds = false;
    bool kb_holds = false;
    bool kakeya_ok = false;
};

struct KakeyaTransformResult {
    PointSet set;
    KakeyaTransformTrace trace;
};

/// Throws WitnessError if some ℓ*_{x,ω_x} leaves N, ParamError for d < 2.
KakeyaTransformResult nikodym_to_kakeya(const PointSet& n, const std::vector<DirIndex>& witnesses);

// ---------------------------------------------------------------------------

struct BoundsReport {
    std::uint64_t q = 0;
    unsigned d = 0;
    bool perfect_square = false;
    bool d_at_least_3 = false;
    std::uint64_t projective_size = 0;       // |FP_q^{d−1}|
    std::uint64_t kakeya_plane_exact = 0;    // Kakeya(2, q), q odd
    double szonyi_lower = 0.0;               // Nikodym(2, q) ≥ ...
    double qtor_upper_main = 0.0;            // q^d − ⌊d/2⌋ q^{d−1/2} (perfect squares)
    double bukh_chao_lower = 0.0;            // q^d / (2 − 1/q)^{d−1}
    double bukh_chao_upper_main = 0.0;       // q^d/2^{d−1} (1 + (d+1−2^{2−d})/q)
    double nikodym_from_kakeya_lower = 0.0;  // Bukh–Chao lower minus the transform slack
    double nik_easy_main = 0.0;              // q^d − (d−1) q^{d−1} ln q
    double nik_conj_main = 0.0;              // q^d − ((d−1)/ln 2) q^{d−1} ln q
    double nik_conj2_main = 0.0;             // q^d − ((d−2)/ln 2 + 1) q^{d−1} ln q
};

/// Throws ParamError unless q is an odd prime power.
BoundsReport known_bounds(std::uint64_t q, unsigned d);

} // namespace nikodym
