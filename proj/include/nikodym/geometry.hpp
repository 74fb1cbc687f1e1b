#pragma once

// Points, directions, lines and point sets over F_q^d.
//
// Point index = Σ_j idx(x_j)·q^j with x_1 (j = 0) least significant.
// A direction is represented by the vector whose first nonzero coordinate
// is 1; directions are numbered by increasing point index of that vector.

#include "nikodym/field.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace nikodym {

using PointIndex = std::uint32_t;
using DirIndex = std::uint32_t;

inline constexpr DirIndex kNoDirection = 0xFFFFFFFFu;
inline constexpr PointIndex kNoPoint = 0xFFFFFFFFu;
inline constexpr std::uint64_t kMaxPoints = std::uint64_t{1} << 22;

struct Point {
    std::vector<Elem> coords;
    PointIndex index = 0;
};

struct Direction {
    std::vector<Elem> rep;
    DirIndex ordinal = 0;
};

class Geometry {
public:
    /// Throws CapacityExceeded when q^d > 2^22.
    static std::shared_ptr<const Geometry> make(FieldPtr field, unsigned d);

    const FieldCtx& field() const noexcept { return *field_; }
    const FieldPtr& field_ptr() const noexcept { return field_; }
    unsigned dim() const noexcept { return d_; }
    std::uint32_t q() const noexcept { return field_->q(); }
    std::uint32_t num_points() const noexcept { return num_points_; }
    std::uint32_t num_directions() const noexcept { return num_directions_; }

    std::span<const Elem> coords(PointIndex x) const noexcept
    {
        return {coords_.data() + std::size_t{x} * d_, d_};
    }
    PointIndex index_of(std::span<const Elem> coords) const;
    Point point(PointIndex x) const;

    PointIndex add(PointIndex a, PointIndex b) const noexcept;
    PointIndex sub(PointIndex a, PointIndex b) const noexcept;
    PointIndex scale(Elem t, PointIndex v) const noexcept;
    /// x + t·v
    PointIndex axpy(PointIndex x, Elem t, PointIndex v) const noexcept;

    /// Ordinal of the direction through a nonzero vector (kNoDirection for 0).
    DirIndex direction_of(PointIndex v) const noexcept { return dir_of_[v]; }
    PointIndex direction_rep(DirIndex ord) const noexcept { return dir_reps_[ord]; }
    /// Coordinate slot holding the leading 1 of the representative.
    unsigned direction_pivot(DirIndex ord) const noexcept { return dir_pivot_[ord]; }

    /// Throws ZeroVector for the zero vector and DimensionMismatch on size.
    Direction canonical_direction(std::span<const Elem> v) const;
    Direction direction(DirIndex ord) const;
    std::vector<Direction> enumerate_directions() const;

    /// ℓ_{x,ω} in parameter order t = 0, 1, ..., q-1 (by element index).
    std::vector<PointIndex> line(PointIndex x, DirIndex dir) const;
    /// ℓ*_{x,ω} = ℓ_{x,ω} \ {x}.
    std::vector<PointIndex> punctured_line(PointIndex x, DirIndex dir) const;

    bool same_field(const Geometry& other) const noexcept
    {
        return field_ == other.field_ || field_->spec() == other.field_->spec();
    }

private:
    Geometry() = default;

    FieldPtr field_;
    unsigned d_ = 0;
    std::uint32_t num_points_ = 0;
    std::uint32_t num_directions_ = 0;
    std::vector<std::uint32_t> stride_;
    std::vector<Elem> coords_;
    std::vector<DirIndex> dir_of_;
    std::vector<PointIndex> dir_reps_;
    std::vector<std::uint8_t> dir_pivot_;
};

using GeomPtr = std::shared_ptr<const Geometry>;

/// Membership bit-table over F_q^d with cached cardinality.
class PointSet {
public:
    static PointSet empty(GeomPtr geom);
    static PointSet full(GeomPtr geom);
    /// Adopts a packed bitmap; bits past num_points must be zero.
    static PointSet from_words(GeomPtr geom, std::vector<std::uint64_t> words);

    const Geometry& geom() const noexcept { return *geom_; }
    const GeomPtr& geom_ptr() const noexcept { return geom_; }

    bool contains(PointIndex x) const noexcept { return (words_[x >> 6] >> (x & 63)) & 1u; }
    void insert(PointIndex x) noexcept;
    void remove(PointIndex x) noexcept;
    std::uint64_t size() const noexcept { return size_; }
    std::uint64_t recount() const noexcept;

    PointSet complement() const;
    std::vector<PointIndex> members() const;
    std::vector<PointIndex> complement_members() const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    bool operator==(const PointSet& other) const noexcept
    {
        return geom_->num_points() == other.geom_->num_points() && words_ == other.words_;
    }

private:
    PointSet(GeomPtr geom, std::vector<std::uint64_t> words);
    void mask_tail() noexcept;

    GeomPtr geom_;
    std::vector<std::uint64_t> words_;
    std::uint64_t size_ = 0;
};

PointSet set_union(const PointSet& a, const PointSet& b);
PointSet set_difference(const PointSet& a, const PointSet& b);
PointSet set_intersection(const PointSet& a, const PointSet& b);

/// S1 × S2 ⊂ F_q^{d1+d2}; the S1 coordinates come first. Throws FieldMismatch.
PointSet product_set(const PointSet& s1, const PointSet& s2);

struct DirectionSet {
    GeomPtr geom;
    std::vector<std::uint8_t> flags;
    std::uint32_t size = 0;

    static DirectionSet none(GeomPtr geom);
    static DirectionSet all(GeomPtr geom);
    bool contains(DirIndex d) const noexcept { return flags[d] != 0; }
    void intersect_with(const DirectionSet& other);
};

} // namespace nikodym
