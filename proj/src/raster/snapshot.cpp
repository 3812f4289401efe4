#include <algorithm>
#include <cmath>

#include "agriseg/kernels.hpp"
#include "agriseg/raster.hpp"

namespace agriseg {
namespace {

// Linear interpolation between order statistics, h = (n - 1) * p.
float percentile(std::vector<float>& values, double percent) {
    const double h = (static_cast<double>(values.size()) - 1.0) * percent / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
    const float a = values[lo];
    if (hi == lo) return a;
    // the next order statistic is the minimum of the upper partition
    const float b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(hi), values.end());
    return static_cast<float>(a + (h - static_cast<double>(lo)) * (b - a));
}

}  // namespace

RgbSnapshot extract_rgb_snapshot(const MultispectralStack& stack, std::size_t t,
                                 const BandTriplet& bands, const StretchPolicy& stretch) {
    if (t >= stack.timesteps()) throw ConfigError("snapshot timestep out of range");
    const std::size_t c = stack.channels();
    if (bands.red >= c || bands.green >= c || bands.blue >= c)
        throw ConfigError("RGB band index out of range");
    if (bands.red == bands.green || bands.red == bands.blue || bands.green == bands.blue)
        throw ConfigError("RGB band indices must be distinct");
    if (stretch.kind == StretchPolicy::Kind::percentile &&
        !(0.0 <= stretch.low_percent && stretch.low_percent < stretch.high_percent &&
          stretch.high_percent <= 100.0))
        throw ConfigError("percentile stretch needs 0 <= low < high <= 100");

    const auto& k = kernels::active();
    const std::size_t px = stack.pixels();
    const float* frame = stack.frame(t).data();

    RgbSnapshot snap;
    snap.tile_id = stack.tile_id();
    snap.source_timestep = t;
    snap.height = stack.height();
    snap.width = stack.width();
    snap.pixels.resize(px * 3);

    std::vector<float> scratch(px);
    std::vector<std::uint8_t> plane(px);
    const std::size_t channel_of[3] = {bands.red, bands.green, bands.blue};
    for (std::size_t out_ch = 0; out_ch < 3; ++out_ch) {
        const std::size_t ch = channel_of[out_ch];
        for (std::size_t i = 0; i < px; ++i) scratch[i] = frame[i * c + ch];
        float lo = 0.0f;
        float hi = 0.0f;
        if (stretch.kind == StretchPolicy::Kind::min_max) {
            const auto [mn, mx] = std::minmax_element(scratch.begin(), scratch.end());
            lo = *mn;
            hi = *mx;
        } else {
            lo = percentile(scratch, stretch.low_percent);
            hi = percentile(scratch, stretch.high_percent);
        }
        if (hi > lo) {
            k.stretch_u8(frame + ch, px, c, lo, 255.0f / (hi - lo), plane.data());
        } else {
            std::fill(plane.begin(), plane.end(), std::uint8_t{128});
        }
        for (std::size_t i = 0; i < px; ++i) snap.pixels[i * 3 + out_ch] = plane[i];
    }
    return snap;
}

ScreenResult screen_clouds(const RgbSnapshot& snapshot, const ScreenPolicy& policy) {
    ScreenResult r;
    const std::size_t px = snapshot.height * snapshot.width;
    if (px > 0) {
        const auto bright = kernels::active().count_bright(snapshot.pixels.data(), px,
                                                           policy.brightness_threshold);
        r.score = static_cast<double>(bright) / static_cast<double>(px);
    }
    r.excluded = policy.excluded_tiles.count(snapshot.tile_id) > 0;
    r.usable = !r.excluded && r.score <= policy.fraction_threshold;
    return r;
}

RgbSnapshot crop(const RgbSnapshot& snapshot, const TileSpec& tile) {
    if (tile.origin_row + tile.side > snapshot.height ||
        tile.origin_col + tile.side > snapshot.width)
        throw ConfigError("tile window " + tile.id() + " exceeds the snapshot");
    RgbSnapshot out;
    out.tile_id = tile.id();
    out.source_timestep = snapshot.source_timestep;
    out.height = tile.side;
    out.width = tile.side;
    out.pixels.resize(tile.side * tile.side * 3);
    for (std::size_t r = 0; r < tile.side; ++r) {
        const std::uint8_t* src = snapshot.pixel(tile.origin_row + r, tile.origin_col);
        std::copy(src, src + tile.side * 3, out.pixels.begin() + static_cast<std::ptrdiff_t>(r * tile.side * 3));
    }
    return out;
}

}  // namespace agriseg
