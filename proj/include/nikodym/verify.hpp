#pragma once

// Exact Nikodym / Kakeya certification.
//
// Both verifiers are complement-driven: their cost scales with the number
// of points missing from the set. The OpenMP kernels and the *_serial
// reference implementations must return identical reports.

#include "nikodym/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nikodym {

struct NikodymReport {
    bool ok = false;
    /// Smallest witness direction per point, kNoDirection where none exists.
    std::vector<DirIndex> witnesses;
    std::vector<PointIndex> failures;
    /// Number of ω with ℓ*_{x,ω} ⊆ S, per point (when requested).
    std::optional<std::vector<std::uint32_t>> robust_counts;

    bool operator==(const NikodymReport&) const = default;
};

struct KakeyaReport {
    bool ok = false;
    /// Smallest base point x with ℓ_{x,ω} ⊆ S per direction, kNoPoint if none.
    std::vector<PointIndex> witnesses;
    std::vector<DirIndex> failures;

    bool operator==(const KakeyaReport&) const = default;
};

NikodymReport nikodym_check(const PointSet& s, bool want_robust = false);
NikodymReport nikodym_check_serial(const PointSet& s, bool want_robust = false);

KakeyaReport kakeya_check(const PointSet& s);
KakeyaReport kakeya_check_serial(const PointSet& s);

std::vector<std::uint32_t> robust_histogram(const PointSet& s);

/// Per direction ω: |ℓ*_{x,ω} \ S|.
std::vector<std::uint32_t> complement_hits(const PointSet& s, PointIndex x);

struct RepairChoice {
    PointIndex point = 0;
    DirIndex direction = 0;
    std::uint32_t missing = 0;
};

/// For each x: the direction minimizing |ℓ*_{x,ω} \ S|, ties to the smallest ordinal.
std::vector<RepairChoice> best_repair_directions(const PointSet& s, std::span<const PointIndex> points);

/// Smallest witness ordinal per point. Throws NotNikodym.
std::vector<DirIndex> extract_witnesses(const PointSet& s);

enum class SetKind { Nikodym, Kakeya };

struct MinimumResult {
    std::uint64_t size = 0;
    PointSet example;
    std::uint64_t subsets_checked = 0;
};

/// Exhaustive search in increasing cardinality; only q = 3, d = 2.
MinimumResult brute_force_minimum(const GeomPtr& geom, SetKind kind);

} // namespace nikodym
