#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace thzcov::mc {

template <class Visit>
bool SegmentGrid::visit_cell(std::uint32_t cell, Visit& visit) {
    for (std::uint32_t k = offsets_[cell]; k < offsets_[cell + 1]; ++k) {
        const std::uint32_t id = items_[k];
        if (stamp_[id] == query_) continue;
        stamp_[id] = query_;
        if (visit(id)) return true;
    }
    return false;
}

// Amanatides-Woo traversal of the cells crossed by the part of `s` inside the extent.
template <class Visit>
bool SegmentGrid::any_along(const Segment& s, Visit&& visit) {
    if (items_.empty()) return false;
    if (++query_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0u);
        query_ = 1;
    }
    const double dx = s.to.x - s.from.x;
    const double dy = s.to.y - s.from.y;
    double t0 = 0.0;
    double t1 = 1.0;
    const auto clip = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;
        const double r = q / p;
        if (p < 0.0) {
            if (r > t1) return false;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return false;
            t1 = std::min(t1, r);
        }
        return true;
    };
    if (!clip(-dx, s.from.x - extent_.x_min) || !clip(dx, extent_.x_max - s.from.x) ||
        !clip(-dy, s.from.y - extent_.y_min) || !clip(dy, extent_.y_max - s.from.y)) {
        return false;
    }
    const double x0 = s.from.x + t0 * dx;
    const double y0 = s.from.y + t0 * dy;
    const auto cell_index = [this](double v, double lo, std::uint32_t n) {
        const double f = std::floor((v - lo) / cell_);
        return static_cast<std::int64_t>(std::clamp(f, 0.0, static_cast<double>(n - 1)));
    };
    std::int64_t ix = cell_index(x0, extent_.x_min, nx_);
    std::int64_t iy = cell_index(y0, extent_.y_min, ny_);
    const std::int64_t ix_end = cell_index(s.from.x + t1 * dx, extent_.x_min, nx_);
    const std::int64_t iy_end = cell_index(s.from.y + t1 * dy, extent_.y_min, ny_);

    constexpr double inf = std::numeric_limits<double>::infinity();
    const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
    const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
    // Parameter values (in units of the full segment) at the next vertical / horizontal cell line.
    double next_x = step_x == 0 ? inf
                                : (extent_.x_min + (ix + (step_x > 0)) * cell_ - s.from.x) / dx;
    double next_y = step_y == 0 ? inf
                                : (extent_.y_min + (iy + (step_y > 0)) * cell_ - s.from.y) / dy;
    const double delta_x = step_x == 0 ? inf : cell_ / std::abs(dx);
    const double delta_y = step_y == 0 ? inf : cell_ / std::abs(dy);

    const std::int64_t max_steps = static_cast<std::int64_t>(nx_) + ny_ + 2;
    for (std::int64_t step = 0; step <= max_steps; ++step) {
        if (visit_cell(static_cast<std::uint32_t>(iy * nx_ + ix), visit)) return true;
        if (ix == ix_end && iy == iy_end) break;
        if (next_x < next_y) {
            if (next_x > t1) break;
            ix += step_x;
            next_x += delta_x;
        } else {
            if (next_y > t1) break;
            iy += step_y;
            next_y += delta_y;
        }
        if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) break;
    }
    return false;
}

}  // namespace thzcov::mc
