#pragma once

// Class-agnostic mask sets: RLE bitmaps, prompt grids, minimum-region-area
// filtering and predicted-IoU consolidation into a LabelMap.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agriseg/error.hpp"
#include "agriseg/label_map.hpp"

namespace agriseg {

/// Row-major run lengths, alternating background/foreground, starting with a
/// background run (possibly 0).
using Rle = std::vector<std::uint32_t>;

Rle encode_rle(std::span<const std::uint8_t> bitmap);
/// Throws FormatError when the runs do not sum to height * width.
std::vector<std::uint8_t> decode_rle(std::span<const std::uint32_t> runs, std::size_t height,
                                     std::size_t width);
/// Merges zero-length interior runs and drops a trailing zero run.
Rle canonical_rle(std::span<const std::uint32_t> runs);
std::uint64_t rle_area(std::span<const std::uint32_t> runs);

struct PromptConfig {
    std::uint32_t pps = 1;
    std::uint64_t mmra = 0;
    double pps_percent = 0.0;
    double mmra_percent = 0.0;

    /// pps = max(1, round(pps_percent * side)), mmra = round(mmra_percent * side^2).
    static PromptConfig resolve(std::size_t side, double pps_percent, double mmra_percent);

    friend bool operator==(const PromptConfig&, const PromptConfig&) = default;
};

struct BooleanMask {
    Rle rle;
    std::size_t height = 0;
    std::size_t width = 0;
    double predicted_iou = 0.0;
    std::uint64_t area = 0;

    static BooleanMask from_bitmap(std::span<const std::uint8_t> bitmap, std::size_t height,
                                   std::size_t width, double predicted_iou);
    std::vector<std::uint8_t> bitmap() const { return decode_rle(rle, height, width); }

    friend bool operator==(const BooleanMask&, const BooleanMask&) = default;
};

struct MaskSet {
    std::string image_id;
    std::size_t height = 0;
    std::size_t width = 0;
    PromptConfig generator;
    std::vector<BooleanMask> masks;

    friend bool operator==(const MaskSet&, const MaskSet&) = default;
};

struct PromptPoint {
    double row = 0.0;
    double col = 0.0;
};

/// pps^2 points at ((a + 0.5) * side / pps, (b + 0.5) * side / pps), row-major.
std::vector<PromptPoint> prompt_grid(std::size_t side, std::uint32_t pps);
std::vector<PromptPoint> prompt_grid(std::size_t height, std::size_t width, std::uint32_t pps);

/// Fills 4-connected background holes (not touching the border) smaller than
/// mmra, then removes 4-connected foreground islands smaller than mmra.
void remove_small_regions(std::vector<std::uint8_t>& bitmap, std::size_t height,
                          std::size_t width, std::uint64_t mmra);
BooleanMask filter_mmra(const BooleanMask& mask, std::uint64_t mmra);

/// Mask indices by descending predicted IoU, then descending area, then index.
std::vector<std::size_t> priority_order(std::span<const BooleanMask> masks);

/// Each pixel goes to the highest-priority mask containing it; uncovered
/// pixels stay 0. Labels are dense 1..K in priority order over masks that
/// claim at least one pixel.
LabelMap consolidate(const MaskSet& set);

}  // namespace agriseg
