#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace agriseg {

struct TileSpec;

/// H x W raster of non-negative labels; 0 is background / unassigned.
struct LabelMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint32_t> labels;
    std::map<std::uint32_t, std::string> legend;

    LabelMap() = default;
    LabelMap(std::size_t h, std::size_t w, std::uint32_t fill = 0)
        : height(h), width(w), labels(h * w, fill) {}

    std::size_t size() const { return labels.size(); }
    std::uint32_t& at(std::size_t row, std::size_t col) { return labels[row * width + col]; }
    std::uint32_t at(std::size_t row, std::size_t col) const { return labels[row * width + col]; }

    friend bool operator==(const LabelMap& a, const LabelMap& b) {
        return a.height == b.height && a.width == b.width && a.labels == b.labels;
    }
};

LabelMap crop(const LabelMap& map, const TileSpec& tile);

// LMAP file: "LMAP", u32 version (1), u32 H, u32 W, then H*W u32 labels,
// all little-endian, row-major.
LabelMap read_label_map(const std::filesystem::path& path);
void write_label_map(const LabelMap& map, const std::filesystem::path& path);

}  // namespace agriseg
