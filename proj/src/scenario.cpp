#include "thzcov/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "thzcov/hitting.hpp"

namespace thzcov {

namespace {

using std::numbers::pi;

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
double deg_to_rad(double deg) { return deg * pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / pi; }

struct NumericKey {
    std::string_view name;
    std::function<void(Scenario&, double)> set;
    std::function<std::optional<double>(const Scenario&)> get;
};

// Serialization order follows this table.
const std::vector<NumericKey>& numeric_keys() {
    static const std::vector<NumericKey> keys = {
        {"h_a_m", [](Scenario& s, double v) { s.network.ap_height = v; },
         [](const Scenario& s) { return std::optional(s.network.ap_height); }},
        {"h_u_m", [](Scenario& s, double v) { s.network.ue_height = v; },
         [](const Scenario& s) { return std::optional(s.network.ue_height); }},
        {"lambda_a_per_m2", [](Scenario& s, double v) { s.network.ap_density = v; },
         [](const Scenario& s) { return std::optional(s.network.ap_density); }},
        {"room_l1_m", [](Scenario& s, double v) { s.network.room_length = v; },
         [](const Scenario& s) { return std::optional(s.network.room_length); }},
        {"room_l2_m", [](Scenario& s, double v) { s.network.room_width = v; },
         [](const Scenario& s) { return std::optional(s.network.room_width); }},
        {"omega_deg", [](Scenario& s, double v) { s.blockage.self_block_angle = deg_to_rad(v); },
         [](const Scenario& s) { return std::optional(rad_to_deg(s.blockage.self_block_angle)); }},
        {"h_b_m", [](Scenario& s, double v) { s.blockage.blocker_height = v; },
         [](const Scenario& s) { return std::optional(s.blockage.blocker_height); }},
        {"w1_m", [](Scenario& s, double v) { s.blockage.blocker_length = v; },
         [](const Scenario& s) { return std::optional(s.blockage.blocker_length); }},
        {"w2_m", [](Scenario& s, double v) { s.blockage.blocker_width = v; },
         [](const Scenario& s) { return std::optional(s.blockage.blocker_width); }},
        {"lambda_b_per_m2", [](Scenario& s, double v) { s.blockage.blocker_density = v; },
         [](const Scenario& s) { return std::optional(s.blockage.blocker_density); }},
        {"v_b_mps", [](Scenario& s, double v) { s.blockage.blocker_speed = v; },
         [](const Scenario& s) { return std::optional(s.blockage.blocker_speed); }},
        {"wall_mean_len_m", [](Scenario& s, double v) { s.blockage.wall_mean_length = v; },
         [](const Scenario& s) { return std::optional(s.blockage.wall_mean_length); }},
        {"lambda_w_per_m2", [](Scenario& s, double v) { s.blockage.wall_density = v; },
         [](const Scenario& s) { return std::optional(s.blockage.wall_density); }},
        {"r_b_m", [](Scenario& s, double v) { s.blockage.planar_blocker_radius = v; },
         [](const Scenario& s) { return std::optional(s.blockage.planar_blocker_radius); }},
        {"phi_ah_deg", [](Scenario& s, double v) { s.ap.beam_horizontal = deg_to_rad(v); },
         [](const Scenario& s) { return std::optional(rad_to_deg(s.ap.beam_horizontal)); }},
        {"phi_av_deg", [](Scenario& s, double v) { s.ap.beam_vertical = deg_to_rad(v); },
         [](const Scenario& s) { return std::optional(rad_to_deg(s.ap.beam_vertical)); }},
        {"phi_uh_deg", [](Scenario& s, double v) { s.ue.beam_horizontal = deg_to_rad(v); },
         [](const Scenario& s) { return std::optional(rad_to_deg(s.ue.beam_horizontal)); }},
        {"phi_uv_deg", [](Scenario& s, double v) { s.ue.beam_vertical = deg_to_rad(v); },
         [](const Scenario& s) { return std::optional(rad_to_deg(s.ue.beam_vertical)); }},
        {"k_a", [](Scenario& s, double v) { s.ap.side_lobe_ratio = v; },
         [](const Scenario& s) { return std::optional(s.ap.side_lobe_ratio); }},
        {"k_u", [](Scenario& s, double v) { s.ue.side_lobe_ratio = v; },
         [](const Scenario& s) { return std::optional(s.ue.side_lobe_ratio); }},
        {"g_am_dbi", [](Scenario& s, double v) { s.ap.main_gain = db_to_linear(v); },
         [](const Scenario& s) {
             return s.ap.main_gain ? std::optional(linear_to_db(*s.ap.main_gain)) : std::nullopt;
         }},
        {"g_as_dbi", [](Scenario& s, double v) { s.ap.side_gain = db_to_linear(v); },
         [](const Scenario& s) {
             return s.ap.side_gain ? std::optional(linear_to_db(*s.ap.side_gain)) : std::nullopt;
         }},
        {"g_um_dbi", [](Scenario& s, double v) { s.ue.main_gain = db_to_linear(v); },
         [](const Scenario& s) {
             return s.ue.main_gain ? std::optional(linear_to_db(*s.ue.main_gain)) : std::nullopt;
         }},
        {"g_us_dbi", [](Scenario& s, double v) { s.ue.side_gain = db_to_linear(v); },
         [](const Scenario& s) {
             return s.ue.side_gain ? std::optional(linear_to_db(*s.ue.side_gain)) : std::nullopt;
         }},
        {"p_t_dbm", [](Scenario& s, double v) { s.propagation.transmit_power = dbm_to_watts(v); },
         [](const Scenario& s) {
             return std::optional(watts_to_dbm(s.propagation.transmit_power));
         }},
        {"sigma2_dbm", [](Scenario& s, double v) { s.propagation.noise_power = dbm_to_watts(v); },
         [](const Scenario& s) { return std::optional(watts_to_dbm(s.propagation.noise_power)); }},
        {"f_thz", [](Scenario& s, double v) { s.propagation.frequency = v * 1e12; },
         [](const Scenario& s) { return std::optional(s.propagation.frequency / 1e12); }},
        {"k_abs_per_m", [](Scenario& s, double v) { s.propagation.absorption = v; },
         [](const Scenario& s) {
             return s.propagation.absorption_table ? std::nullopt
                                                   : std::optional(s.propagation.absorption);
         }},
        {"tau_db", [](Scenario& s, double v) { s.propagation.sinr_threshold = db_to_linear(v); },
         [](const Scenario& s) {
             return std::optional(linear_to_db(s.propagation.sinr_threshold));
         }},
        {"r_t_m", [](Scenario& s, double v) { s.propagation.association_radius_override = v; },
         [](const Scenario& s) { return s.propagation.association_radius_override; }},
    };
    return keys;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

[[noreturn]] void line_error(std::size_t line, const std::string& what) {
    throw ConfigError("line " + std::to_string(line) + ": " + what);
}

void require(bool ok, const char* invariant) {
    if (!ok) throw ConfigError(std::string("invalid scenario: requires ") + invariant);
}

}  // namespace

AntennaPattern AntennaParams::pattern() const {
    return AntennaPattern::from_beamwidths(beam_horizontal, beam_vertical, side_lobe_ratio,
                                           main_gain, side_gain);
}

AbsorptionTable AbsorptionTable::parse(std::string_view csv, std::string source) {
    AbsorptionTable table;
    table.source = std::move(source);
    std::size_t line_no = 0;
    std::istringstream in{std::string(csv)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(std::string_view(raw).substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) line_error(line_no, "expected 'frequency_hz,K_per_m'");
        const auto f = parse_number(trim(line.substr(0, comma)));
        const auto k = parse_number(trim(line.substr(comma + 1)));
        if (!f || !k) {
            if (table.points.empty() && line_no == 1) continue;  // header row
            line_error(line_no, "non-numeric absorption table entry");
        }
        if (*f <= 0.0 || *k < 0.0) line_error(line_no, "absorption table needs f > 0 and K >= 0");
        if (!table.points.empty() && *f <= table.points.back().first) {
            line_error(line_no, "absorption table frequencies must increase strictly");
        }
        table.points.emplace_back(*f, *k);
    }
    if (table.points.size() < 2) throw ConfigError("absorption table needs at least two rows");
    return table;
}

AbsorptionTable AbsorptionTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open absorption table '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

double AbsorptionTable::at(double frequency) const {
    if (frequency < points.front().first || frequency > points.back().first) {
        throw ConfigError("frequency " + format_double(frequency) +
                          " Hz lies outside the absorption table range");
    }
    const auto upper = std::lower_bound(
        points.begin(), points.end(), frequency,
        [](const std::pair<double, double>& p, double f) { return p.first < f; });
    if (upper->first == frequency) return upper->second;
    const auto lower = std::prev(upper);
    const double w = (frequency - lower->first) / (upper->first - lower->first);
    return lower->second + w * (upper->second - lower->second);
}

double PropagationParams::absorption_at_carrier() const {
    return absorption_table ? absorption_table->at(frequency) : absorption;
}

PropagationParams Scenario::default_propagation() {
    PropagationParams p;
    p.transmit_power = dbm_to_watts(5.0);
    p.noise_power = dbm_to_watts(-77.0);
    p.frequency = 1.05e12;
    p.absorption = 0.07512;
    p.sinr_threshold = db_to_linear(3.0);
    return p;
}

void Scenario::validate() const {
    const auto& n = network;
    const auto& b = blockage;
    const auto& p = propagation;
    require(n.ue_height > 0.0, "h_U > 0");
    require(n.ap_height > n.ue_height, "h_A > h_U");
    require(n.ap_density >= 0.0, "lambda_A >= 0");
    require(n.room_length > 0.0 && n.room_width > 0.0, "l1, l2 > 0");
    require(b.self_block_angle >= 0.0 && b.self_block_angle < 2.0 * pi, "0 <= omega < 2 pi");
    require(b.blocker_height > n.ue_height && b.blocker_height < n.ap_height, "h_U < h_B < h_A");
    require(b.blocker_length > 0.0 && b.blocker_width > 0.0, "w1, w2 > 0");
    require(b.blocker_density >= 0.0, "lambda_B >= 0");
    require(b.wall_density >= 0.0, "lambda_W >= 0");
    require(b.wall_mean_length > 0.0, "E[L_W] > 0");
    require(b.blocker_speed >= 0.0, "v_B >= 0");
    require(b.planar_blocker_radius >= 0.0, "r_B >= 0");
    for (const AntennaParams* a : {&ap, &ue}) {
        require(a->beam_horizontal > 0.0 && a->beam_horizontal < pi &&
                    a->beam_vertical > 0.0 && a->beam_vertical < pi,
                "0 < phi < pi");
        require(std::tan(a->beam_horizontal / 2.0) * std::tan(a->beam_vertical / 2.0) <= 1.0,
                "tan(phi_H/2) tan(phi_V/2) <= 1");
        require(a->side_lobe_ratio > 0.0 && a->side_lobe_ratio < 1.0, "0 < k < 1");
        require((!a->main_gain || *a->main_gain > 0.0) && (!a->side_gain || *a->side_gain > 0.0),
                "gain overrides > 0");
    }
    require(b.self_block_angle + ue.beam_horizontal <= 2.0 * pi, "omega + phi_UH <= 2 pi");
    require(p.transmit_power > 0.0, "P_T > 0");
    require(p.noise_power > 0.0, "sigma^2 > 0");
    require(p.frequency > 0.0, "f > 0");
    require(p.absorption >= 0.0, "K >= 0");
    require(p.sinr_threshold > 0.0, "tau > 0");
    require(!p.association_radius_override || *p.association_radius_override > 0.0, "R_T > 0");
}

Scenario load_scenario(std::string_view text, const std::filesystem::path& base_dir) {
    Scenario s;
    std::set<std::string, std::less<>> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(std::string_view(raw).substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) line_error(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) line_error(line_no, "expected 'key = value'");
        if (!seen.insert(key).second) line_error(line_no, "duplicate key '" + key + "'");

        if (key == "k_abs_table") {
            std::filesystem::path path{std::string(value)};
            if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
            s.propagation.absorption_table = AbsorptionTable::load(path);
            s.propagation.absorption_table->source = std::string(value);
            continue;
        }
        if (key == "wall_length_law") {
            if (value == "fixed") {
                s.blockage.wall_length_law = WallLengthLaw::Fixed;
            } else if (value == "exponential") {
                s.blockage.wall_length_law = WallLengthLaw::Exponential;
            } else {
                line_error(line_no, "wall_length_law must be 'fixed' or 'exponential'");
            }
            continue;
        }
        const auto& keys = numeric_keys();
        const auto it = std::find_if(keys.begin(), keys.end(),
                                     [&](const NumericKey& k) { return k.name == key; });
        if (it == keys.end()) line_error(line_no, "unknown key '" + key + "'");
        const auto number = parse_number(value);
        if (!number) line_error(line_no, "value of '" + key + "' is not a finite number");
        it->set(s, *number);
    }
    if (seen.count("k_abs_per_m") && seen.count("k_abs_table")) {
        throw ConfigError("k_abs_per_m and k_abs_table are mutually exclusive");
    }
    s.validate();
    return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_scenario(buffer.str(), path.parent_path());
}

// Shortest decimal that reloads to the stored value; unit conversions are not exact inverses,
// so nearby doubles of the external value are tried as well.
std::string exact_text(const NumericKey& key, const Scenario& s, double external) {
    constexpr int kNeighbours = 16;
    std::vector<double> candidates{external};
    double below = external;
    double above = external;
    for (int i = 0; i < kNeighbours; ++i) {
        below = std::nextafter(below, -HUGE_VAL);
        above = std::nextafter(above, HUGE_VAL);
        candidates.push_back(below);
        candidates.push_back(above);
    }
    // Shortest round-trip text of each nearby double, tried from shortest to longest.
    std::vector<std::string> texts;
    for (double c : candidates) {
        char buffer[64];
        const auto result = std::to_chars(buffer, buffer + sizeof buffer, c);
        texts.emplace_back(buffer, result.ptr);
    }
    std::stable_sort(texts.begin(), texts.end(),
                     [](const std::string& a, const std::string& b) { return a.size() < b.size(); });
    for (const auto& text : texts) {
        const auto parsed = parse_number(text);
        if (!parsed) continue;
        Scenario probe = s;
        key.set(probe, *parsed);
        if (probe == s) return text;
    }
    return format_double(external);
}

std::string serialize(const Scenario& s) {
    std::ostringstream out;
    for (const auto& key : numeric_keys()) {
        if (const auto v = key.get(s)) out << key.name << " = " << exact_text(key, s, *v) << '\n';
    }
    if (s.propagation.absorption_table) {
        out << "k_abs_table = " << s.propagation.absorption_table->source << '\n';
    }
    out << "wall_length_law = "
        << (s.blockage.wall_length_law == WallLengthLaw::Fixed ? "fixed" : "exponential") << '\n';
    return out.str();
}

DerivedParams derive_constants(const Scenario& s, Environment env) {
    s.validate();
    const auto& b = s.blockage;
    DerivedParams d;
    d.height_gap = s.height_gap();
    d.human_clear_scale = std::exp(-2.0 * b.blocker_length * b.blocker_width * b.blocker_density);
    d.human_decay = 2.0 * (b.blocker_length + b.blocker_width) * b.blocker_density *
                    (b.blocker_height - s.network.ue_height) / (pi * d.height_gap);
    d.wall_decay = env == Environment::OpenOffice
                       ? 0.0
                       : b.wall_density * (2.0 / pi) * b.wall_mean_length;
    d.decay = d.human_decay + d.wall_decay;
    d.ap_pattern = s.ap.pattern();
    d.ue_pattern = s.ue.pattern();
    d.link = LinkBudget::make(s.propagation.transmit_power, d.ap_pattern, d.ue_pattern,
                              s.propagation.frequency, s.propagation.absorption_at_carrier(),
                              s.propagation.noise_power, s.propagation.sinr_threshold);
    d.association_radius = s.propagation.association_radius_override
                               ? *s.propagation.association_radius_override
                               : max_association_radius(d.link, d.height_gap);
    const HittingModel hitting = HittingModel::from(s, d, env);
    d.association_normalizer = hitting.normalizer();
    d.association_elevation = hitting.association_elevation();
    d.hitting_onset = hitting.onset();
    d.hitting_cutoff = hitting.cutoff();
    return d;
}

std::string_view to_string(Environment env) {
    return env == Environment::TypicalIndoor ? "indoor" : "open-office";
}

Environment parse_environment(std::string_view text) {
    if (text == "indoor" || text == "typical-indoor") return Environment::TypicalIndoor;
    if (text == "open-office" || text == "open") return Environment::OpenOffice;
    throw ConfigError("unknown environment '" + std::string(text) + "'");
}

}  // namespace thzcov
