#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace thzcov::mc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

double norm(Vec2 v);
double azimuth_of(Vec2 v);  // in [0, 2 pi)

struct Segment {
    Vec2 from;
    Vec2 to;
};

struct Box {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
};

// Axis-aligned wall segment.
struct Wall {
    Vec2 center;
    bool vertical = false;  // orientation pi/2 when true, 0 otherwise
    double length = 0.0;

    Segment segment() const;
};

// Rectangular blocker footprint: `length` along the orientation, `width` across it.
struct Human {
    Vec2 center;
    double orientation = 0.0;
    double length = 0.0;
    double width = 0.0;

    Box bounds() const;
};

// Closed-set intersection: touching endpoints and collinear overlaps count.
bool segments_intersect(const Segment& a, const Segment& b);
bool segment_hits_footprint(const Human& h, const Segment& s);

bool is_wall_blocked(std::span<const Wall> walls, const Segment& link);
// Only the part of the link within `blocking_fraction` of its length from the UE can be cut.
bool is_human_blocked(std::span<const Human> humans, Vec2 ue, Vec2 ap, double blocking_fraction);
Segment truncated_link(Vec2 ue, Vec2 ap, double blocking_fraction);

bool in_self_blockage(double interferer_azimuth, double serving_azimuth, double self_block_angle);

// Uniform grid of item ids bucketed by bounding box; visits the candidates near a segment.
class SegmentGrid {
public:
    SegmentGrid() = default;
    void reset(const Box& extent, double cell);
    void insert(std::uint32_t id, const Box& bounds);
    void finalize();  // must follow the inserts and precede queries

    template <class Visit>
    bool any_along(const Segment& s, Visit&& visit);

private:
    struct Span {
        std::uint32_t ix0, iy0, ix1, iy1;
    };
    bool cell_range(const Box& b, Span& out) const;
    template <class Visit>
    bool visit_cell(std::uint32_t cell, Visit& visit);

    Box extent_;
    double cell_ = 1.0;
    std::uint32_t nx_ = 0;
    std::uint32_t ny_ = 0;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> items_;
    std::vector<std::pair<std::uint32_t, Span>> pending_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t query_ = 0;
};

}  // namespace thzcov::mc

#include "thzcov/geometry_grid.inl"
