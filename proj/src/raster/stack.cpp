#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "agriseg/raster.hpp"

namespace agriseg {

MultispectralStack::MultispectralStack(std::string tile_id, std::vector<std::string> band_names,
                                       std::size_t timesteps, std::size_t height,
                                       std::size_t width, std::vector<float> data)
    : tile_id_(std::move(tile_id)),
      band_names_(std::move(band_names)),
      timesteps_(timesteps),
      height_(height),
      width_(width),
      data_(std::move(data)) {
    if (timesteps_ < 1 || height_ < 1 || width_ < 1)
        throw DataError("stack '" + tile_id_ + "': T, H and W must all be >= 1");
    if (band_names_.size() < 3)
        throw DataError("stack '" + tile_id_ + "': at least 3 channels required");
    std::unordered_set<std::string> seen;
    for (const auto& name : band_names_) {
        if (!seen.insert(name).second)
            throw DataError("stack '" + tile_id_ + "': duplicate band name '" + name + "'");
    }
    if (data_.size() != timesteps_ * height_ * width_ * band_names_.size())
        throw DataError("stack '" + tile_id_ + "': data size does not match T*H*W*C");
    const auto bad = std::find_if(data_.begin(), data_.end(),
                                  [](float v) { return !std::isfinite(v) || v < 0.0f; });
    if (bad != data_.end())
        throw DataError("stack '" + tile_id_ + "': reflectance must be finite and >= 0 (index " +
                        std::to_string(bad - data_.begin()) + ")");
}

std::span<const float> MultispectralStack::frame(std::size_t t) const {
    const std::size_t n = pixels() * channels();
    return std::span<const float>(data_).subspan(t * n, n);
}

std::size_t MultispectralStack::band_index(const std::string& name) const {
    const auto it = std::find(band_names_.begin(), band_names_.end(), name);
    if (it == band_names_.end())
        throw ConfigError("stack '" + tile_id_ + "' has no band named '" + name + "'");
    return static_cast<std::size_t>(it - band_names_.begin());
}

}  // namespace agriseg
