#include "thzcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thzcov/antenna.hpp"

namespace thzcov::mc {

namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool within_bounds(const Segment& s, Vec2 p) {
    return std::min(s.from.x, s.to.x) <= p.x && p.x <= std::max(s.from.x, s.to.x) &&
           std::min(s.from.y, s.to.y) <= p.y && p.y <= std::max(s.from.y, s.to.y);
}

bool straddles(double d1, double d2) { return (d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0); }

}  // namespace

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

double azimuth_of(Vec2 v) {
    const double a = std::atan2(v.y, v.x);
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

Segment Wall::segment() const {
    const double h = length / 2.0;
    return vertical ? Segment{{center.x, center.y - h}, {center.x, center.y + h}}
                    : Segment{{center.x - h, center.y}, {center.x + h, center.y}};
}

Box Human::bounds() const {
    const double c = std::abs(std::cos(orientation));
    const double s = std::abs(std::sin(orientation));
    const double ex = (c * length + s * width) / 2.0;
    const double ey = (s * length + c * width) / 2.0;
    return {center.x - ex, center.y - ey, center.x + ex, center.y + ey};
}

bool segments_intersect(const Segment& a, const Segment& b) {
    const double d1 = cross(b.from, b.to, a.from);
    const double d2 = cross(b.from, b.to, a.to);
    const double d3 = cross(a.from, a.to, b.from);
    const double d4 = cross(a.from, a.to, b.to);
    if (straddles(d1, d2) && straddles(d3, d4)) return true;
    return (d1 == 0.0 && within_bounds(b, a.from)) || (d2 == 0.0 && within_bounds(b, a.to)) ||
           (d3 == 0.0 && within_bounds(a, b.from)) || (d4 == 0.0 && within_bounds(a, b.to));
}

bool segment_hits_footprint(const Human& h, const Segment& s) {
    // Liang-Barsky clip in the footprint's own frame; closed box.
    const double c = std::cos(h.orientation);
    const double sn = std::sin(h.orientation);
    const auto local = [&](Vec2 p) {
        const Vec2 d = p - h.center;
        return Vec2{c * d.x + sn * d.y, -sn * d.x + c * d.y};
    };
    const Vec2 p = local(s.from);
    const Vec2 q = local(s.to);
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double hx = h.length / 2.0;
    const double hy = h.width / 2.0;
    double t0 = 0.0;
    double t1 = 1.0;
    const auto clip = [&](double den, double num) {
        if (den == 0.0) return num >= 0.0;
        const double r = num / den;
        if (den < 0.0) {
            if (r > t1) return false;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return false;
            t1 = std::min(t1, r);
        }
        return true;
    };
    return clip(-dx, p.x + hx) && clip(dx, hx - p.x) && clip(-dy, p.y + hy) && clip(dy, hy - p.y);
}

bool is_wall_blocked(std::span<const Wall> walls, const Segment& link) {
    return std::any_of(walls.begin(), walls.end(),
                       [&](const Wall& w) { return segments_intersect(w.segment(), link); });
}

Segment truncated_link(Vec2 ue, Vec2 ap, double blocking_fraction) {
    return {ue, ue + blocking_fraction * (ap - ue)};
}

bool is_human_blocked(std::span<const Human> humans, Vec2 ue, Vec2 ap, double blocking_fraction) {
    const Segment cut = truncated_link(ue, ap, blocking_fraction);
    return std::any_of(humans.begin(), humans.end(),
                       [&](const Human& h) { return segment_hits_footprint(h, cut); });
}

bool in_self_blockage(double interferer_azimuth, double serving_azimuth, double self_block_angle) {
    if (self_block_angle <= 0.0) return false;
    return std::abs(wrap_angle(interferer_azimuth - serving_azimuth - std::numbers::pi)) <=
           self_block_angle / 2.0;
}

void SegmentGrid::reset(const Box& extent, double cell) {
    extent_ = extent;
    cell_ = cell;
    nx_ = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(
                                         std::ceil((extent.x_max - extent.x_min) / cell)));
    ny_ = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(
                                         std::ceil((extent.y_max - extent.y_min) / cell)));
    pending_.clear();
    items_.clear();
    offsets_.clear();
}

bool SegmentGrid::cell_range(const Box& b, Span& out) const {
    // Slack so that items touching a cell line land in both neighbours.
    const double slack = 1e-9 * cell_;
    const auto index = [this](double v, double lo, std::uint32_t n) {
        const double f = std::floor((v - lo) / cell_);
        return static_cast<std::uint32_t>(std::clamp(f, 0.0, static_cast<double>(n - 1)));
    };
    if (b.x_max < extent_.x_min - slack || b.x_min > extent_.x_max + slack ||
        b.y_max < extent_.y_min - slack || b.y_min > extent_.y_max + slack) {
        return false;
    }
    out = {index(b.x_min - slack, extent_.x_min, nx_), index(b.y_min - slack, extent_.y_min, ny_),
           index(b.x_max + slack, extent_.x_min, nx_), index(b.y_max + slack, extent_.y_min, ny_)};
    return true;
}

void SegmentGrid::insert(std::uint32_t id, const Box& bounds) {
    Span span{};
    if (cell_range(bounds, span)) pending_.emplace_back(id, span);
}

void SegmentGrid::finalize() {
    const std::size_t cells = static_cast<std::size_t>(nx_) * ny_;
    offsets_.assign(cells + 1, 0);
    std::uint32_t max_id = 0;
    for (const auto& [id, sp] : pending_) {
        max_id = std::max(max_id, id);
        for (std::uint32_t iy = sp.iy0; iy <= sp.iy1; ++iy) {
            for (std::uint32_t ix = sp.ix0; ix <= sp.ix1; ++ix) ++offsets_[iy * nx_ + ix + 1];
        }
    }
    for (std::size_t c = 0; c < cells; ++c) offsets_[c + 1] += offsets_[c];
    items_.assign(offsets_[cells], 0);
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [id, sp] : pending_) {
        for (std::uint32_t iy = sp.iy0; iy <= sp.iy1; ++iy) {
            for (std::uint32_t ix = sp.ix0; ix <= sp.ix1; ++ix) items_[cursor[iy * nx_ + ix]++] = id;
        }
    }
    if (stamp_.size() < static_cast<std::size_t>(max_id) + 1) stamp_.assign(max_id + 1, 0);
    // Stamps from earlier scenes may coincide with future query numbers; start clean.
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    query_ = 0;
}

}  // namespace thzcov::mc
