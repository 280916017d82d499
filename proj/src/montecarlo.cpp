#include "thzcov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace thzcov::mc {

namespace {

using std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Cheap-to-seed generator for the per-AP UE placement substreams.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

template <class Rng>
double uniform(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Rng>
std::size_t poisson(Rng& rng, double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::size_t>(mean)(rng);
}

struct HeapEntry {
    double bound;
    std::uint32_t index;
    bool user_main;
    double distance3d;
    friend bool operator<(const HeapEntry& a, const HeapEntry& b) { return a.bound < b.bound; }
};

// Runs `trial(index)` for every index and sums the integer outcomes.
template <class Trial>
std::pair<std::size_t, std::size_t> run_trials(std::size_t trials, unsigned threads, Trial trial) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));
    std::vector<std::pair<std::size_t, std::size_t>> partial(threads, {0, 0});
    std::vector<std::exception_ptr> errors(threads);
    const auto worker = [&](unsigned t) {
        try {
            for (std::size_t i = t; i < trials; i += threads) {
                const auto [ok, rejected] = trial(i);
                partial[t].first += ok ? 1 : 0;
                partial[t].second += rejected;
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::pair<std::size_t, std::size_t> total{0, 0};
    for (const auto& p : partial) {
        total.first += p.first;
        total.second += p.second;
    }
    return total;
}

}  // namespace

struct Simulator::Workspace {
    Scene scene;
    SegmentGrid humans;
    SegmentGrid walls;
    std::vector<HeapEntry> heap;
};

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

Boresight Scene::user_boresight(double height_gap) const {
    return {serving_azimuth, std::atan2(height_gap, serving_distance)};
}

Estimate make_estimate(std::size_t successes, std::size_t trials, std::size_t rejected) {
    Estimate e;
    e.trials = trials;
    e.mean = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    e.half_width = trials ? 1.96 * std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials)) : 0.0;
    e.rejected_associations = rejected;
    return e;
}

Simulator::Simulator(const Scenario& s, Environment env)
    : scenario_(s),
      env_(env),
      derived_(derive_constants(s, env)),
      blocking_fraction_((s.blockage.blocker_height - s.network.ue_height) / s.height_gap()) {
    const auto& n = s.network;
    const double footprint = std::hypot(s.blockage.blocker_length, s.blockage.blocker_width) / 2.0;
    human_reach_ = blocking_fraction_ * std::hypot(n.room_length / 2.0, n.room_width / 2.0) +
                   footprint + 1e-6;
}

bool Simulator::walls_enabled() const {
    return env_ == Environment::TypicalIndoor && scenario_.blockage.wall_density > 0.0;
}

Wall Simulator::draw_wall(std::mt19937_64& rng, double cx, double cy, double half_x,
                          double half_y) const {
    Wall w;
    w.center = {cx + (2.0 * uniform(rng) - 1.0) * half_x, cy + (2.0 * uniform(rng) - 1.0) * half_y};
    w.vertical = uniform(rng) < 0.5;
    const double mean = scenario_.blockage.wall_mean_length;
    w.length = scenario_.blockage.wall_length_law == WallLengthLaw::Fixed
                   ? mean
                   : std::exponential_distribution<double>(1.0 / mean)(rng);
    return w;
}

void Simulator::sample_layout(double serving_distance, std::mt19937_64& rng, Scene& out,
                              bool include_far_humans) const {
    const auto& n = scenario_.network;
    const double half_x = n.room_length / 2.0;
    const double half_y = n.room_width / 2.0;
    if (serving_distance < 0.0 || serving_distance > std::hypot(half_x, half_y)) {
        throw std::invalid_argument("serving distance must lie within the room half-diagonal");
    }
    const double area = n.room_length * n.room_width;

    out.serving_distance = serving_distance;
    out.serving_azimuth = 2.0 * pi * uniform(rng);
    out.serving_ap = {serving_distance * std::cos(out.serving_azimuth),
                      serving_distance * std::sin(out.serving_azimuth)};
    out.rejected_associations = 0;
    out.wall_resamples = 0;

    out.walls.clear();
    if (walls_enabled()) {
        const Segment serving{{0.0, 0.0}, out.serving_ap};
        for (;;) {
            out.walls.clear();
            const std::size_t count = poisson(rng, scenario_.blockage.wall_density * area);
            for (std::size_t i = 0; i < count; ++i) out.walls.push_back(draw_wall(rng, 0.0, 0.0, half_x, half_y));
            if (!is_wall_blocked(out.walls, serving)) break;
            if (++out.wall_resamples >= static_cast<std::size_t>(kMaxWallResamples)) {
                throw std::runtime_error("no wall layout leaves the serving link clear");
            }
        }
    }

    out.interferers.clear();
    const std::size_t aps = poisson(rng, n.ap_density * area);
    for (std::size_t i = 0; i < aps; ++i) {
        const double x = (2.0 * uniform(rng) - 1.0) * half_x;
        const double y = (2.0 * uniform(rng) - 1.0) * half_y;
        out.interferers.push_back({{x, y}, std::nullopt});
    }

    out.association_key = rng();

    // Blockers inside the reach box first; the remainder of the room is an independent
    // Poisson process that can never cut a truncated user link.
    out.humans.clear();
    const auto& b = scenario_.blockage;
    const double box = std::min(human_reach_, std::min(half_x, half_y));
    const auto draw_human = [&](Vec2 center) {
        Human h;
        h.center = center;
        h.orientation = 2.0 * pi * uniform(rng);
        h.length = b.blocker_length;
        h.width = b.blocker_width;
        out.humans.push_back(h);
    };
    const std::size_t near_people = poisson(rng, b.blocker_density * 4.0 * box * box);
    for (std::size_t i = 0; i < near_people; ++i) {
        draw_human({(2.0 * uniform(rng) - 1.0) * box, (2.0 * uniform(rng) - 1.0) * box});
    }
    out.near_humans = out.humans.size();
    if (!include_far_humans) return;
    const std::size_t far_people = poisson(rng, b.blocker_density * (area - 4.0 * box * box));
    for (std::size_t i = 0; i < far_people;) {
        const Vec2 c{(2.0 * uniform(rng) - 1.0) * half_x, (2.0 * uniform(rng) - 1.0) * half_y};
        if (std::abs(c.x) < box && std::abs(c.y) < box) continue;
        draw_human(c);
        ++i;
    }
}

template <class Blocked>
std::optional<Vec2> Simulator::associate(Vec2 ap, std::uint64_t key, std::uint32_t index,
                                         Blocked&& wall_blocked) const {
    SplitMix64 rng(splitmix64(key + index));
    const double radius = derived_.association_radius;
    for (int attempt = 0; attempt < kMaxAssociationAttempts; ++attempt) {
        const double r = radius * std::sqrt(uniform(rng));
        const double a = 2.0 * pi * uniform(rng);
        const Vec2 ue{ap.x + r * std::cos(a), ap.y + r * std::sin(a)};
        if (!walls_enabled() || !wall_blocked(Segment{ap, ue})) return ue;
    }
    return std::nullopt;
}

Scene Simulator::sample_scene(double serving_distance, std::mt19937_64& rng) const {
    Scene scene;
    sample_layout(serving_distance, rng, scene, true);
    const auto blocked = [&](const Segment& s) { return is_wall_blocked(scene.walls, s); };
    for (std::size_t i = 0; i < scene.interferers.size(); ++i) {
        auto& it = scene.interferers[i];
        it.ue = associate(it.ap, scene.association_key, static_cast<std::uint32_t>(i), blocked);
        if (!it.ue) ++scene.rejected_associations;
    }
    return scene;
}

SinrResult Simulator::sinr(const Scene& scene) const {
    const double gap = derived_.height_gap;
    const auto& lb = derived_.link;
    const Vec2 user{0.0, 0.0};
    SinrResult r;
    r.serving_los = !is_human_blocked(scene.humans, user, scene.serving_ap, blocking_fraction_);
    const Boresight user_beam = scene.user_boresight(gap);
    for (const Interferer& it : scene.interferers) {
        if (!it.ue) continue;
        const double x = norm(it.ap);
        const double azimuth = azimuth_of(it.ap);
        if (in_self_blockage(azimuth, scene.serving_azimuth, scenario_.blockage.self_block_angle)) continue;
        if (is_wall_blocked(scene.walls, Segment{user, it.ap})) continue;
        if (is_human_blocked(scene.humans, user, it.ap, blocking_fraction_)) continue;
        const bool user_main =
            in_main_lobe(derived_.ue_pattern, user_beam, {azimuth, std::atan2(gap, x)});
        const Vec2 to_ue = *it.ue - it.ap;
        const Boresight ap_beam{azimuth_of(to_ue), -std::atan2(gap, norm(to_ue))};
        const bool ap_main = in_main_lobe(derived_.ap_pattern, ap_beam,
                                          {azimuth_of(user - it.ap), -std::atan2(gap, x)});
        r.interference += received_power(x, ap_main ? Lobe::Main : Lobe::Side,
                                         user_main ? Lobe::Main : Lobe::Side, lb, gap);
    }
    const double signal = received_power(scene.serving_distance, Lobe::Main, Lobe::Main, lb, gap);
    r.sinr = signal / (lb.noise + r.interference);
    return r;
}

Simulator::TrialOutcome Simulator::run_coverage_trial(double serving_distance,
                                                      std::uint64_t seed) const {
    thread_local Workspace ws;
    Scene& scene = ws.scene;
    std::mt19937_64 rng(seed);
    sample_layout(serving_distance, rng, scene, false);

    TrialOutcome outcome;
    const double gap = derived_.height_gap;
    const auto& lb = derived_.link;
    const Vec2 user{0.0, 0.0};

    const auto& n = scenario_.network;
    const double reach = human_reach_;
    ws.humans.reset({-reach, -reach, reach, reach}, 1.0);
    for (std::size_t i = 0; i < scene.near_humans; ++i) {
        ws.humans.insert(static_cast<std::uint32_t>(i), scene.humans[i].bounds());
    }
    ws.humans.finalize();
    const auto human_blocked = [&](Vec2 ap) {
        const Segment cut = truncated_link(user, ap, blocking_fraction_);
        return ws.humans.any_along(cut, [&](std::uint32_t id) {
            return segment_hits_footprint(scene.humans[id], cut);
        });
    };
    if (human_blocked(scene.serving_ap)) return outcome;

    const double signal = received_power(serving_distance, Lobe::Main, Lobe::Main, lb, gap);
    const double budget = signal / lb.threshold - lb.noise;  // covered iff interference <= budget
    if (budget < 0.0) return outcome;

    // Angular tests as dot products; the user's vertical beam as a distance interval.
    const RegionBounds beam = region_bounds(serving_distance, scenario_.ue.beam_vertical, gap);
    const Vec2 toward{std::cos(scene.serving_azimuth), std::sin(scene.serving_azimuth)};
    const double cos_beam = std::cos(scenario_.ue.beam_horizontal / 2.0);
    const double omega = scenario_.blockage.self_block_angle;
    const double cos_self = std::cos(omega / 2.0);
    auto& heap = ws.heap;
    heap.clear();
    double remaining = 0.0;
    for (std::size_t i = 0; i < scene.interferers.size(); ++i) {
        const Vec2 ap = scene.interferers[i].ap;
        const double x = std::sqrt(ap.x * ap.x + ap.y * ap.y);
        const double along = ap.x * toward.x + ap.y * toward.y;
        if (omega > 0.0 && -along >= x * cos_self) continue;
        const bool user_main = along >= x * cos_beam && x >= beam.inner && x <= beam.outer;
        const double d = std::sqrt(x * x + gap * gap);
        const double bound = lb.g(Lobe::Main, user_main ? Lobe::Main : Lobe::Side) *
                             std::exp(-lb.absorption * d) / (d * d);
        heap.push_back({bound, static_cast<std::uint32_t>(i), user_main, d});
        remaining += bound;
    }
    std::make_heap(heap.begin(), heap.end());

    bool wall_index_ready = false;
    const auto build_wall_index = [&] {
        double margin = 0.0;
        for (const Wall& w : scene.walls) margin = std::max(margin, w.length / 2.0);
        const double hx = n.room_length / 2.0 + margin + 1e-6;
        const double hy = n.room_width / 2.0 + margin + 1e-6;
        ws.walls.reset({-hx, -hy, hx, hy}, 3.0);
        for (std::size_t i = 0; i < scene.walls.size(); ++i) {
            const Segment s = scene.walls[i].segment();
            ws.walls.insert(static_cast<std::uint32_t>(i),
                            {std::min(s.from.x, s.to.x), std::min(s.from.y, s.to.y),
                             std::max(s.from.x, s.to.x), std::max(s.from.y, s.to.y)});
        }
        ws.walls.finalize();
        wall_index_ready = true;
    };
    const auto wall_blocked = [&](const Segment& link) {
        if (!wall_index_ready) build_wall_index();
        return ws.walls.any_along(link, [&](std::uint32_t id) {
            return segments_intersect(scene.walls[id].segment(), link);
        });
    };

    // Resolve interferers in decreasing order of their power bound until the sum is decided.
    constexpr double kBoundSlack = 1.0 + 1e-12;
    double interference = 0.0;
    while (!heap.empty()) {
        if (interference > budget) return outcome;
        if (interference + remaining * kBoundSlack <= budget) break;
        std::pop_heap(heap.begin(), heap.end());
        const HeapEntry e = heap.back();
        heap.pop_back();
        remaining = std::max(0.0, remaining - e.bound);

        Interferer& it = scene.interferers[e.index];
        if (human_blocked(it.ap)) continue;
        if (walls_enabled() && wall_blocked(Segment{user, it.ap})) continue;
        it.ue = associate(it.ap, scene.association_key, e.index, wall_blocked);
        if (!it.ue) {
            ++outcome.rejected_associations;
            continue;
        }
        const double x = norm(it.ap);
        const Vec2 to_ue = *it.ue - it.ap;
        const Boresight ap_beam{azimuth_of(to_ue), -std::atan2(gap, norm(to_ue))};
        const bool ap_main = in_main_lobe(derived_.ap_pattern, ap_beam,
                                          {azimuth_of(user - it.ap), -std::atan2(gap, x)});
        interference += lb.g(ap_main ? Lobe::Main : Lobe::Side, e.user_main ? Lobe::Main : Lobe::Side) *
                        std::exp(-lb.absorption * e.distance3d) / (e.distance3d * e.distance3d);
    }
    outcome.covered = interference <= budget;
    return outcome;
}

Estimate Simulator::estimate_coverage(double serving_distance, std::size_t trials,
                                      std::uint64_t seed, unsigned threads) const {
    if (trials == 0) throw std::invalid_argument("trials must be at least 1");
    const auto [hits, rejected] = run_trials(trials, threads, [&](std::size_t i) {
        const TrialOutcome o = run_coverage_trial(serving_distance, trial_seed(seed, i));
        return std::pair<bool, std::size_t>{o.covered, o.rejected_associations};
    });
    return make_estimate(hits, trials, rejected);
}

Estimate Simulator::estimate_hitting(double distance, std::size_t trials, std::uint64_t seed,
                                     unsigned threads) const {
    if (trials == 0) throw std::invalid_argument("trials must be at least 1");
    if (distance < 0.0) throw std::invalid_argument("distance must be nonnegative");
    const double gap = derived_.height_gap;
    const double radius = derived_.association_radius;
    const auto& b = scenario_.blockage;
    // Walls farther than this from the AP cannot cross an association link.
    const double margin = b.wall_length_law == WallLengthLaw::Fixed ? b.wall_mean_length / 2.0
                                                                    : 20.0 * b.wall_mean_length;
    const double half = radius + margin;
    const auto [hits, rejected] = run_trials(trials, threads, [&](std::size_t i) {
        thread_local std::vector<Wall> walls;
        std::mt19937_64 rng(trial_seed(seed, i));
        const double azimuth = 2.0 * pi * uniform(rng);
        const Vec2 ap{distance * std::cos(azimuth), distance * std::sin(azimuth)};
        walls.clear();
        if (walls_enabled()) {
            const std::size_t count = poisson(rng, b.wall_density * 4.0 * half * half);
            for (std::size_t k = 0; k < count; ++k) walls.push_back(draw_wall(rng, ap.x, ap.y, half, half));
        }
        const auto blocked = [&](const Segment& s) { return is_wall_blocked(walls, s); };
        const auto ue = associate(ap, rng(), 0, blocked);
        if (!ue) return std::pair<bool, std::size_t>{false, 1};
        const Vec2 to_ue = *ue - ap;
        const Boresight beam{azimuth_of(to_ue), -std::atan2(gap, norm(to_ue))};
        const Vec2 to_user = Vec2{0.0, 0.0} - ap;
        const bool hit = in_main_lobe(derived_.ap_pattern, beam,
                                      {azimuth_of(to_user), -std::atan2(gap, norm(to_user))});
        return std::pair<bool, std::size_t>{hit, 0};
    });
    return make_estimate(hits, trials, rejected);
}

Scene sample_scene(const Scenario& s, Environment env, double serving_distance,
                   std::mt19937_64& rng) {
    return Simulator(s, env).sample_scene(serving_distance, rng);
}

SinrResult sinr(const Scene& scene, const Scenario& s, Environment env) {
    return Simulator(s, env).sinr(scene);
}

Estimate estimate_coverage(const Scenario& s, Environment env, double serving_distance,
                           std::size_t trials, std::uint64_t seed, unsigned threads) {
    return Simulator(s, env).estimate_coverage(serving_distance, trials, seed, threads);
}

Estimate estimate_hitting(const Scenario& s, Environment env, double distance, std::size_t trials,
                          std::uint64_t seed, unsigned threads) {
    return Simulator(s, env).estimate_hitting(distance, trials, seed, threads);
}

}  // namespace thzcov::mc
