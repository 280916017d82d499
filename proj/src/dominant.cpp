#include "thzcov/dominant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "thzcov/specfun.hpp"

namespace thzcov {

namespace {

using std::numbers::pi;
using specfun::xexp_integral;

// Tail beyond which x e^{-decay x} is below e^{-80} of its scale.
constexpr double kTailDecayLengths = 80.0;

double guarded_far(double a, double b, const InterferenceContext& ctx) {
    return a < b ? far_integral(a, b, ctx) : 0.0;
}

// Closed-form pieces of the open-office far integral. With c = cot(half beam),
// q = gap (1 + c^2), u = x + sign gap c, the tilted-edge term expands as
// cot^2(elevation + sign half) x = c^2 x - 2 sign c q + A/u - sign B/u^2.
class TiltedEdgeIntegral {
public:
    TiltedEdgeIntegral(const HittingModel& m, double decay)
        : decay_(decay),
          gap_(m.height_gap()),
          c_(1.0 / std::tan(m.beam_vertical() / 2.0)),
          q_(gap_ * (1.0 + c_ * c_)),
          a_coef_(2.0 * c_ * c_ * q_ * gap_ + q_ * q_),
          b_coef_(c_ * gap_ * q_ * q_),
          scale_(gap_ * gap_ / (m.association_radius() * m.association_radius())) {}

    // (gap^2/R^2) \int_p^q cot^2(elevation(x) + sign half) x e^{-decay x} dx
    double operator()(int sign, double p, double q) const {
        const double shift = sign * gap_ * c_;
        const double up = p + shift;
        const double uq = q + shift;
        const double boundary =
            (q == kUnbounded ? 0.0 : std::exp(-decay_ * q) / uq) - std::exp(-decay_ * p) / up;
        double log_part = 0.0;
        if (decay_ == 0.0) {
            log_part = std::log(uq / up);
        } else {
            const double tail = q == kUnbounded ? 0.0 : specfun::expint_ei(-decay_ * uq);
            log_part = std::exp(decay_ * shift) * (tail - specfun::expint_ei(-decay_ * up));
        }
        return scale_ * (c_ * c_ * xexp_integral(decay_, p, q) -
                         2.0 * sign * c_ * q_ * specfun::exp_integral(decay_, p, q) +
                         sign * b_coef_ * boundary + (a_coef_ + sign * decay_ * b_coef_) * log_part);
    }

private:
    double decay_;
    double gap_;
    double c_;
    double q_;
    double a_coef_;
    double b_coef_;
    double scale_;
};

}  // namespace

InterferenceContext InterferenceContext::make(const Scenario& s, Environment env) {
    return make(s, derive_constants(s, env), env);
}

InterferenceContext InterferenceContext::make(const Scenario& s, const DerivedParams& d,
                                              Environment env) {
    const bool open = env == Environment::OpenOffice;
    return InterferenceContext{
        .link = d.link,
        .height_gap = d.height_gap,
        .ap_density = s.network.ap_density,
        .los_scale = d.human_clear_scale,
        .los_decay = open ? d.human_decay : d.decay,
        .ue_beam_horizontal = s.ue.beam_horizontal,
        .ue_beam_vertical = s.ue.beam_vertical,
        .self_block_angle = s.blockage.self_block_angle,
        .hitting = HittingModel::from(s, d, env),
        .profile = open ? FarProfile::OpenOfficeClosed : FarProfile::Quadrature,
    };
}

InterferenceContext InterferenceContext::make_planar(const Scenario& s, double blocker_radius) {
    const DerivedParams d = derive_constants(s, Environment::TypicalIndoor);
    InterferenceContext ctx = make(s, d, Environment::TypicalIndoor);
    const auto& b = s.blockage;
    const double planar_human_decay =
        2.0 * (b.blocker_length + b.blocker_width) * b.blocker_density / pi;
    ctx.los_scale = d.human_clear_scale * std::exp(-planar_human_decay * blocker_radius);
    ctx.los_decay = planar_human_decay + d.wall_decay;
    ctx.profile = FarProfile::Flat;
    return ctx;
}

RegionBounds region_bounds(double serving_distance, double ue_beam_vertical, double height_gap) {
    RegionBounds r;
    r.serving_elevation = std::atan2(height_gap, serving_distance);
    r.inner = distance_below(serving_distance, ue_beam_vertical / 2.0, height_gap);
    r.outer = distance_above(serving_distance, ue_beam_vertical / 2.0, height_gap);
    return r;
}

DominantRegions dominant_regions(double serving_distance, const InterferenceContext& ctx) {
    DominantRegions r;
    r.serving_distance = serving_distance;
    r.bounds = region_bounds(serving_distance, ctx.ue_beam_vertical, ctx.height_gap);
    for (Lobe a : {Lobe::Main, Lobe::Side}) {
        for (Lobe u : {Lobe::Main, Lobe::Side}) {
            r.boundary[static_cast<int>(a)][static_cast<int>(u)] =
                dominant_distance(serving_distance, a, u, ctx.link, ctx.height_gap);
        }
    }
    r.snr_infeasible = r.D(Lobe::Main, Lobe::Main) == kUnbounded;
    const double lo = r.bounds.inner;
    const double hi = r.bounds.outer;
    r.v_mm = std::min(hi, r.D(Lobe::Main, Lobe::Main));
    r.v_ms = std::max(lo, std::min(hi, r.D(Lobe::Side, Lobe::Main)));
    r.v_sm1 = std::min(lo, r.D(Lobe::Main, Lobe::Side));
    r.v_sm2 = std::max(hi, r.D(Lobe::Main, Lobe::Side));
    r.v_ss1 = std::min(lo, r.D(Lobe::Side, Lobe::Side));
    r.v_ss2 = std::max(hi, r.D(Lobe::Side, Lobe::Side));
    r.main_sector = ctx.ue_beam_horizontal;
    r.side_sector = 2.0 * pi - ctx.ue_beam_horizontal - ctx.self_block_angle;
    return r;
}

DominantRegions dominant_regions(double serving_distance, const Scenario& s) {
    return dominant_regions(serving_distance,
                            InterferenceContext::make(s, Environment::TypicalIndoor));
}

double near_count(const DominantRegions& r, const InterferenceContext& ctx) {
    if (r.snr_infeasible) return kUnbounded;
    const double decay = ctx.los_decay;
    const auto S = [decay](double a, double b) { return xexp_integral(decay, a, b); };
    const double d_ss = r.D(Lobe::Side, Lobe::Side);
    const double base = ctx.ap_density * ctx.los_scale;
    const double main_lobe_terms =
        S(0.0, r.v_ss1) + S(r.bounds.inner, r.v_ms) + S(r.bounds.outer, r.v_ss2) - S(0.0, d_ss);
    return base * r.main_sector * main_lobe_terms +
           base * (2.0 * pi - ctx.self_block_angle) * S(0.0, d_ss);
}

double far_count(const DominantRegions& r, const InterferenceContext& ctx) {
    if (r.snr_infeasible) return kUnbounded;
    const double d_ss = r.D(Lobe::Side, Lobe::Side);
    const double d_ms = r.D(Lobe::Main, Lobe::Side);
    const double beam_share = ctx.hitting.horizontal();  // phi_AH / 2 pi
    const double base = ctx.ap_density * ctx.los_scale * beam_share;
    const double side_only = guarded_far(d_ss, d_ms, ctx);
    const double main_lobe_terms = guarded_far(r.v_ss1, r.v_sm1, ctx) +
                                   guarded_far(r.v_ms, r.v_mm, ctx) +
                                   guarded_far(r.v_ss2, r.v_sm2, ctx) - side_only;
    return base * r.main_sector * main_lobe_terms +
           base * (2.0 * pi - ctx.self_block_angle) * side_only;
}

double far_integral(double a, double b, const InterferenceContext& ctx) {
    switch (ctx.profile) {
        case FarProfile::Flat: return xexp_integral(ctx.los_decay, a, b);
        case FarProfile::OpenOfficeClosed: return digamma_open_office(a, b, ctx.hitting, ctx.los_decay);
        case FarProfile::Quadrature: break;
    }
    return digamma_integral(a, b, ctx.hitting, ctx.los_decay);
}

double digamma_integral(double a, double b, const HittingModel& m, double decay) {
    if (!(a <= b) || a < 0.0) throw specfun::DomainError("far integral needs 0 <= a <= b");
    double upper = std::min(b, m.cutoff());
    if (a >= upper) return 0.0;
    if (upper == kUnbounded) {
        if (decay <= 0.0) return kUnbounded;
        upper = std::max({a, m.onset(), m.zenith_edge()}) + kTailDecayLengths / decay;
    }
    specfun::QuadratureSpec spec;
    spec.breakpoints = {m.zenith_edge(), m.onset()};
    std::sort(spec.breakpoints.begin(), spec.breakpoints.end());
    return specfun::integrate(
        [&](double x) { return m.vertical(x) * std::exp(-decay * x) * x; }, a, upper, spec);
}

double digamma_integral(double a, double b, const Scenario& s) {
    const auto ctx = InterferenceContext::make(s, Environment::TypicalIndoor);
    return digamma_integral(a, b, ctx.hitting, ctx.los_decay);
}

double digamma_open_office(double a, double b, const HittingModel& m, double decay) {
    if (!(a <= b) || a < 0.0) throw specfun::DomainError("far integral needs 0 <= a <= b");
    const double upper = std::min(b, m.cutoff());
    if (a >= upper) return 0.0;
    if (upper == kUnbounded && decay <= 0.0) return kUnbounded;

    std::vector<double> knots{a};
    for (double k : {std::min(m.zenith_edge(), m.onset()), std::max(m.zenith_edge(), m.onset())}) {
        if (k > knots.back() && k < upper) knots.push_back(k);
    }
    knots.push_back(upper);

    const TiltedEdgeIntegral tilted(m, decay);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double p = knots[i];
        const double q = knots[i + 1];
        const double probe = q == kUnbounded ? p + 1.0 : 0.5 * (p + q);
        const bool lower_at_support_edge = probe > m.onset();
        const bool upper_at_zenith = probe <= m.zenith_edge();
        const double lower_part = lower_at_support_edge ? xexp_integral(decay, p, q) : tilted(-1, p, q);
        const double upper_part = upper_at_zenith ? 0.0 : tilted(+1, p, q);
        total += lower_part - upper_part;
    }
    return total;
}

double digamma_open_office(double a, double b, const Scenario& s) {
    const auto ctx = InterferenceContext::make(s, Environment::OpenOffice);
    return digamma_open_office(a, b, ctx.hitting, ctx.los_decay);
}

double lambda_near(double serving_distance, const Scenario& s) {
    const auto ctx = InterferenceContext::make(s, Environment::TypicalIndoor);
    return near_count(dominant_regions(serving_distance, ctx), ctx);
}

double lambda_far(double serving_distance, const Scenario& s) {
    const auto ctx = InterferenceContext::make(s, Environment::TypicalIndoor);
    return far_count(dominant_regions(serving_distance, ctx), ctx);
}

double lambda_near_open_office(double serving_distance, const Scenario& s) {
    const auto ctx = InterferenceContext::make(s, Environment::OpenOffice);
    return near_count(dominant_regions(serving_distance, ctx), ctx);
}

double lambda_far_open_office(double serving_distance, const Scenario& s) {
    const auto ctx = InterferenceContext::make(s, Environment::OpenOffice);
    return far_count(dominant_regions(serving_distance, ctx), ctx);
}

}  // namespace thzcov
