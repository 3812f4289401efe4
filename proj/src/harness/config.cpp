#include <fstream>
#include <sstream>
#include <type_traits>

#include "agriseg/error.hpp"
#include "agriseg/harness.hpp"
#include "json.hpp"

namespace agriseg {
namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& v, const char* key) {
    if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned())
            throw ConfigError(std::string("config: '") + key + "' must be a non-negative integer");
    }
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: '") + key + "' has the wrong type");
    }
}

}  // namespace

std::size_t StridePolicy::stride_for(std::size_t side) const {
    switch (kind) {
        case Kind::side: return side;
        case Kind::half: return std::max<std::size_t>(1, side / 2);
        case Kind::pixels: return pixels;
    }
    return side;
}

void ExperimentConfig::validate() const {
    if (aoi_factors.empty() || pps_percents.empty() || mmra_percents.empty())
        throw ConfigError("config: sweep axes must be non-empty");
    for (auto f : aoi_factors)
        if (f < 1) throw ConfigError("config: aoi factors must be >= 1");
    for (double p : pps_percents)
        if (!(p > 0.0 && p <= 1.0)) throw ConfigError("config: pps_percents must lie in (0, 1]");
    for (double m : mmra_percents)
        if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("config: mmra_percents must lie in [0, 1]");
    if (samples_per_set < 1) throw ConfigError("config: samples_per_set must be >= 1");
    if (stride.kind == StridePolicy::Kind::pixels && stride.pixels < 1)
        throw ConfigError("config: stride must be >= 1 pixel");
    if (oracle_tolerance < 0 || oracle_tolerance > 255)
        throw ConfigError("config: oracle_tolerance must lie in [0, 255]");
    if (!(stretch.low_percent >= 0.0 && stretch.low_percent < stretch.high_percent &&
          stretch.high_percent <= 100.0))
        throw ConfigError("config: stretch percentiles must satisfy 0 <= low < high <= 100");
    if (!(screen.fraction_threshold >= 0.0 && screen.fraction_threshold <= 1.0))
        throw ConfigError("config: cloud fraction_threshold must lie in [0, 1]");
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");

    ExperimentConfig cfg;
    for (const auto& [key, v] : doc.items()) {
        const char* k = key.c_str();
        if (key == "aoi_factors") {
            if (!v.is_array()) throw ConfigError("config: 'aoi_factors' must be an array");
            cfg.aoi_factors.clear();
            for (const auto& f : v) cfg.aoi_factors.push_back(get_as<std::size_t>(f, k));
        }
        else if (key == "pps_percents") cfg.pps_percents = get_as<std::vector<double>>(v, k);
        else if (key == "mmra_percents") cfg.mmra_percents = get_as<std::vector<double>>(v, k);
        else if (key == "samples_per_set") cfg.samples_per_set = get_as<std::size_t>(v, k);
        else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, k);
        else if (key == "stride") {
            if (v.is_string()) {
                const auto s = v.get<std::string>();
                if (s == "side") cfg.stride.kind = StridePolicy::Kind::side;
                else if (s == "half") cfg.stride.kind = StridePolicy::Kind::half;
                else throw ConfigError("config: stride must be \"side\", \"half\" or an integer");
            } else {
                cfg.stride.kind = StridePolicy::Kind::pixels;
                cfg.stride.pixels = get_as<std::size_t>(v, k);
            }
        } else if (key == "exclude_background") cfg.exclude_background = get_as<bool>(v, k);
        else if (key == "segmenter") {
            const auto s = get_as<std::string>(v, k);
            if (s == "color-oracle") cfg.segmenter = SegmenterKind::color_oracle;
            else if (s == "external") cfg.segmenter = SegmenterKind::external;
            else throw ConfigError("config: segmenter must be \"color-oracle\" or \"external\"");
        } else if (key == "oracle_tolerance") cfg.oracle_tolerance = get_as<int>(v, k);
        else if (key == "nir_band") cfg.nir_band = get_as<std::string>(v, k);
        else if (key == "red_band") cfg.red_band = get_as<std::string>(v, k);
        else if (key == "rgb_bands") cfg.rgb_bands = get_as<std::array<std::string, 3>>(v, k);
        else if (key == "stretch") {
            const auto s = get_as<std::string>(v, k);
            if (s == "percentile") cfg.stretch = StretchPolicy{};
            else if (s == "minmax") cfg.stretch = StretchPolicy::min_max();
            else throw ConfigError("config: stretch must be \"percentile\" or \"minmax\"");
        } else if (key == "stretch_percentiles") {
            const auto p = get_as<std::array<double, 2>>(v, k);
            cfg.stretch.low_percent = p[0];
            cfg.stretch.high_percent = p[1];
        } else if (key == "cloud_brightness_threshold") {
            const int t = get_as<int>(v, k);
            if (t < 0 || t > 255) throw ConfigError("config: cloud_brightness_threshold must lie in [0, 255]");
            cfg.screen.brightness_threshold = static_cast<std::uint8_t>(t);
        } else if (key == "cloud_fraction_threshold") cfg.screen.fraction_threshold = get_as<double>(v, k);
        else if (key == "exclusion_list") cfg.exclusion_list = get_as<std::string>(v, k);
        else if (key == "tails_k") cfg.tails_k = get_as<std::size_t>(v, k);
        else if (key == "strict") cfg.strict = get_as<bool>(v, k);
        else if (key == "emit_timing") cfg.emit_timing = get_as<bool>(v, k);
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

}  // namespace agriseg
