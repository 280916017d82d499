#pragma once

#include <filesystem>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thzcov/antenna.hpp"
#include "thzcov/propagation.hpp"

namespace thzcov {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Environment { TypicalIndoor, OpenOffice };
enum class WallLengthLaw { Fixed, Exponential };

// All quantities in SI units and radians; linear powers and gains.
struct NetworkParams {
    double ap_height = 3.0;
    double ue_height = 1.3;
    double ap_density = 0.1;
    double room_length = 60.0;
    double room_width = 50.0;

    friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

struct BlockageParams {
    double self_block_angle = std::numbers::pi / 3.0;
    double blocker_height = 1.7;
    double blocker_length = 0.6;  // footprint side along the blocker orientation
    double blocker_width = 0.3;
    double blocker_density = 0.1;
    double blocker_speed = 1.0;   // carried only; snapshots are stationary
    double wall_mean_length = 3.0;
    double wall_density = 0.04;
    WallLengthLaw wall_length_law = WallLengthLaw::Fixed;
    double planar_blocker_radius = 0.3;  // extra blocking length used by the planar baseline

    friend bool operator==(const BlockageParams&, const BlockageParams&) = default;
};

struct AntennaParams {
    double beam_horizontal = 0.0;
    double beam_vertical = 0.0;
    double side_lobe_ratio = 0.1;
    std::optional<double> main_gain;
    std::optional<double> side_gain;

    AntennaPattern pattern() const;

    friend bool operator==(const AntennaParams&, const AntennaParams&) = default;
};

struct AbsorptionTable {
    std::string source;
    std::vector<std::pair<double, double>> points;  // (frequency Hz, K per meter), sorted

    static AbsorptionTable load(const std::filesystem::path& path);
    static AbsorptionTable parse(std::string_view csv, std::string source);
    double at(double frequency) const;

    friend bool operator==(const AbsorptionTable&, const AbsorptionTable&) = default;
};

struct PropagationParams {
    double transmit_power = 0.0;  // watts
    double noise_power = 0.0;     // watts
    double frequency = 1.05e12;
    double absorption = 0.07512;
    std::optional<AbsorptionTable> absorption_table;
    double sinr_threshold = 0.0;
    std::optional<double> association_radius_override;

    double absorption_at_carrier() const;

    friend bool operator==(const PropagationParams&, const PropagationParams&) = default;
};

struct Scenario {
    NetworkParams network;
    BlockageParams blockage;
    AntennaParams ap{std::numbers::pi / 18.0, std::numbers::pi / 18.0,
                     0.1, std::nullopt, std::nullopt};
    AntennaParams ue{std::numbers::pi * 33.0 / 180.0, std::numbers::pi * 33.0 / 180.0,
                     0.1, std::nullopt, std::nullopt};
    PropagationParams propagation = default_propagation();

    double height_gap() const { return network.ap_height - network.ue_height; }
    double wall_height() const { return network.ap_height; }

    // Throws ConfigError naming the first violated invariant.
    void validate() const;

    static PropagationParams default_propagation();

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct DerivedParams {
    double height_gap = 0.0;
    double human_clear_scale = 1.0;  // LoS probability at zero distance under human blockage
    double human_decay = 0.0;
    double wall_decay = 0.0;
    double decay = 0.0;
    AntennaPattern ap_pattern;
    AntennaPattern ue_pattern;
    LinkBudget link;
    double association_radius = 0.0;
    double association_normalizer = 0.0;
    double association_elevation = 0.0;  // elevation angle of a UE at the association radius
    double hitting_onset = 0.0;          // distance of peak vertical hitting probability
    double hitting_cutoff = 0.0;         // beyond this the AP main lobe cannot reach the user
};

Scenario load_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario_file(const std::filesystem::path& path);
std::string serialize(const Scenario& s);

DerivedParams derive_constants(const Scenario& s, Environment env = Environment::TypicalIndoor);

std::string_view to_string(Environment env);
Environment parse_environment(std::string_view text);

}  // namespace thzcov
