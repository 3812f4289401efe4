#include <algorithm>
#include <numeric>

#include "agriseg/raster.hpp"

namespace agriseg {
namespace {

std::vector<std::size_t> window_origins(std::size_t extent, std::size_t side, std::size_t stride) {
    std::vector<std::size_t> origins;
    for (std::size_t o = 0; o + side <= extent; o += stride) origins.push_back(o);
    if (origins.back() + side < extent) origins.push_back(extent - side);
    return origins;
}

}  // namespace

std::string TileSpec::id() const {
    return parent_tile_id + "_s" + std::to_string(side) + "_r" + std::to_string(origin_row) +
           "_c" + std::to_string(origin_col);
}

std::vector<TileSpec> tile_image(std::size_t height, std::size_t width, std::size_t factor,
                                 std::size_t stride, const std::string& parent_tile_id) {
    if (factor < 1) throw ConfigError("tiling factor must be >= 1");
    if (stride < 1) throw ConfigError("tiling stride must be >= 1");
    const std::size_t side = std::min(height, width) / factor;
    if (side == 0) throw ConfigError("tiling factor leaves a zero-sized window");

    std::vector<TileSpec> tiles;
    for (std::size_t r : window_origins(height, side, stride)) {
        for (std::size_t c : window_origins(width, side, stride)) {
            tiles.push_back({parent_tile_id, r, c, side, side});
        }
    }
    return tiles;
}

std::vector<std::size_t> sample_indices(std::size_t length, std::size_t n, std::uint64_t seed) {
    if (n > length)
        throw ConfigError("cannot sample " + std::to_string(n) + " of " + std::to_string(length) +
                          " items");
    std::vector<std::size_t> idx(length);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(length - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    return idx;
}

}  // namespace agriseg
