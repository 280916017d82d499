#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "thzcov/coverage.hpp"
#include "thzcov/geometry.hpp"
#include "thzcov/scenario.hpp"

namespace thzcov::mc {

struct Interferer {
    Vec2 ap;
    std::optional<Vec2> ue;  // empty when no wall-clear UE position was found
};

// One stationary realization centred on the typical user at the origin.
struct Scene {
    double serving_distance = 0.0;
    double serving_azimuth = 0.0;
    Vec2 serving_ap;
    std::vector<Interferer> interferers;
    std::vector<Wall> walls;
    std::vector<Human> humans;
    std::size_t near_humans = 0;  // humans[0, near_humans) lie in the box around the user
    std::uint64_t association_key = 0;  // seeds the per-AP UE placement substreams
    std::size_t wall_resamples = 0;
    std::size_t rejected_associations = 0;

    Boresight user_boresight(double height_gap) const;
};

struct SinrResult {
    double sinr = 0.0;
    bool serving_los = false;
    double interference = 0.0;
};

// Counter-based seed for trial `index`; results do not depend on how trials are scheduled.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

class Simulator {
public:
    Simulator(const Scenario& s, Environment env);

    Scene sample_scene(double serving_distance, std::mt19937_64& rng) const;
    SinrResult sinr(const Scene& scene) const;

    // Decides one trial without materialising the UEs of interferers that cannot matter.
    // Agrees with `sinr` on the scene drawn from the same seed.
    struct TrialOutcome {
        bool covered = false;
        std::size_t rejected_associations = 0;
    };
    TrialOutcome run_coverage_trial(double serving_distance, std::uint64_t seed) const;

    Estimate estimate_coverage(double serving_distance, std::size_t trials, std::uint64_t seed,
                               unsigned threads = 0) const;
    Estimate estimate_hitting(double distance, std::size_t trials, std::uint64_t seed,
                              unsigned threads = 0) const;

    const DerivedParams& derived() const { return derived_; }
    const Scenario& scenario() const { return scenario_; }
    Environment environment() const { return env_; }

    static constexpr int kMaxAssociationAttempts = 1000;
    static constexpr int kMaxWallResamples = 100000;

private:
    struct Workspace;

    void sample_layout(double serving_distance, std::mt19937_64& rng, Scene& out,
                       bool include_far_humans) const;
    template <class Blocked>
    std::optional<Vec2> associate(Vec2 ap, std::uint64_t key, std::uint32_t index,
                                  Blocked&& wall_blocked) const;
    Wall draw_wall(std::mt19937_64& rng, double cx, double cy, double half_x, double half_y) const;
    bool walls_enabled() const;

    Scenario scenario_;
    Environment env_;
    DerivedParams derived_;
    double blocking_fraction_;
    double human_reach_ = 0.0;  // half side of the box holding every blocker that can matter
};

Scene sample_scene(const Scenario& s, Environment env, double serving_distance,
                   std::mt19937_64& rng);
SinrResult sinr(const Scene& scene, const Scenario& s, Environment env);
Estimate estimate_coverage(const Scenario& s, Environment env, double serving_distance,
                           std::size_t trials, std::uint64_t seed, unsigned threads = 0);
Estimate estimate_hitting(const Scenario& s, Environment env, double distance, std::size_t trials,
                          std::uint64_t seed, unsigned threads = 0);

Estimate make_estimate(std::size_t successes, std::size_t trials, std::size_t rejected);

}  // namespace thzcov::mc
