#pragma once

// Multispectral stacks, NDVI, peak-greenness snapshots, cloud screening and
// sub-tiling.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "agriseg/error.hpp"
#include "agriseg/rng.hpp"

namespace agriseg {

/// Reflectance tensor, layout T x H x W x C (channels innermost).
class MultispectralStack {
public:
    MultispectralStack() = default;

    /// Validates dims, band names and values; throws DataError.
    MultispectralStack(std::string tile_id, std::vector<std::string> band_names,
                       std::size_t timesteps, std::size_t height, std::size_t width,
                       std::vector<float> data);

    const std::string& tile_id() const { return tile_id_; }
    const std::vector<std::string>& band_names() const { return band_names_; }
    std::size_t timesteps() const { return timesteps_; }
    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t channels() const { return band_names_.size(); }
    std::size_t pixels() const { return height_ * width_; }

    std::span<const float> data() const { return data_; }
    /// Interleaved H x W x C frame at timestep t.
    std::span<const float> frame(std::size_t t) const;
    float at(std::size_t t, std::size_t row, std::size_t col, std::size_t ch) const {
        return data_[((t * height_ + row) * width_ + col) * channels() + ch];
    }

    /// Channel index by band name; throws ConfigError if absent.
    std::size_t band_index(const std::string& name) const;

private:
    std::string tile_id_;
    std::vector<std::string> band_names_;
    std::size_t timesteps_ = 0;
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<float> data_;
};

struct BandTriplet {
    std::size_t red = 0;
    std::size_t green = 0;
    std::size_t blue = 0;
};

struct RgbSnapshot {
    std::string tile_id;
    std::size_t source_timestep = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> pixels;  // H x W x 3, interleaved

    const std::uint8_t* pixel(std::size_t row, std::size_t col) const {
        return pixels.data() + (row * width + col) * 3;
    }
};

struct NdviSeries {
    std::vector<double> means;          // spatial mean over valid pixels
    std::vector<std::uint8_t> valid;    // 0 where a timestep has no valid pixel
    std::optional<std::vector<float>> per_pixel;           // T x H x W
    std::optional<std::vector<std::uint8_t>> per_pixel_valid;

    std::size_t size() const { return means.size(); }
    bool is_valid(std::size_t t) const { return valid[t] != 0; }
};

struct StretchPolicy {
    enum class Kind { percentile, min_max };
    Kind kind = Kind::percentile;
    double low_percent = 2.0;
    double high_percent = 98.0;

    static StretchPolicy min_max() { return {Kind::min_max, 0.0, 100.0}; }
};

struct ScreenPolicy {
    std::uint8_t brightness_threshold = 200;
    double fraction_threshold = 0.05;
    std::set<std::string> excluded_tiles;
};

struct ScreenResult {
    bool usable = true;
    bool excluded = false;  // tile id was on the exclusion list
    double score = 0.0;     // fraction of bright pixels
};

struct TileSpec {
    std::string parent_tile_id;
    std::size_t origin_row = 0;
    std::size_t origin_col = 0;
    std::size_t side = 0;
    std::size_t aoi_side = 0;

    /// "<parent>_s<side>_r<row>_c<col>"
    std::string id() const;
};

NdviSeries compute_ndvi(const MultispectralStack& stack, std::size_t nir, std::size_t red,
                        bool keep_per_pixel = false);

/// Argmax of the valid means, smallest index on ties. Throws UnusableTileError.
std::size_t select_max_ndvi_timestep(const NdviSeries& series);

RgbSnapshot extract_rgb_snapshot(const MultispectralStack& stack, std::size_t t,
                                 const BandTriplet& bands, const StretchPolicy& stretch = {});

ScreenResult screen_clouds(const RgbSnapshot& snapshot, const ScreenPolicy& policy = {});

/// Square windows of side floor(min(H, W) / factor) placed every `stride`
/// pixels, with a final window clamped flush to each edge. Row-major order.
std::vector<TileSpec> tile_image(std::size_t height, std::size_t width, std::size_t factor,
                                 std::size_t stride, const std::string& parent_tile_id = {});

RgbSnapshot crop(const RgbSnapshot& snapshot, const TileSpec& tile);

/// Indices of a seeded partial Fisher-Yates shuffle; first n of the shuffle order.
std::vector<std::size_t> sample_indices(std::size_t length, std::size_t n, std::uint64_t seed);

template <typename T>
std::vector<T> sample_select(std::span<const T> items, std::size_t n, std::uint64_t seed) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i : sample_indices(items.size(), n, seed)) out.push_back(items[i]);
    return out;
}

}  // namespace agriseg
