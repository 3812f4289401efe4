#include <algorithm>
#include <numeric>

#include "agriseg/kernels.hpp"
#include "agriseg/mask.hpp"

namespace agriseg {

std::vector<std::size_t> priority_order(std::span<const BooleanMask> masks) {
    std::vector<std::size_t> order(masks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (masks[a].predicted_iou != masks[b].predicted_iou)
            return masks[a].predicted_iou > masks[b].predicted_iou;
        return masks[a].area > masks[b].area;
    });
    return order;
}

LabelMap consolidate(const MaskSet& set) {
    for (std::size_t i = 0; i < set.masks.size(); ++i) {
        const auto& runs = set.masks[i].rle;
        if (std::accumulate(runs.begin(), runs.end(), std::uint64_t{0}) !=
            static_cast<std::uint64_t>(set.height) * set.width)
            throw DataError("mask " + std::to_string(i) + " of '" + set.image_id +
                            "': RLE runs do not cover the image");
        if (set.masks[i].height != set.height || set.masks[i].width != set.width)
            throw DataError("mask " + std::to_string(i) + " of '" + set.image_id +
                            "' has dimensions " + std::to_string(set.masks[i].height) + "x" +
                            std::to_string(set.masks[i].width) + ", expected " +
                            std::to_string(set.height) + "x" + std::to_string(set.width));
    }
    const auto& k = kernels::active();
    LabelMap out(set.height, set.width);
    std::vector<std::uint8_t> bits(out.size());
    std::uint32_t next = 1;
    for (std::size_t idx : priority_order(set.masks)) {
        const Rle& runs = set.masks[idx].rle;
        std::fill(bits.begin(), bits.end(), std::uint8_t{0});
        std::size_t pos = 0;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            if (r % 2 == 1) std::fill_n(bits.begin() + static_cast<std::ptrdiff_t>(pos), runs[r], std::uint8_t{1});
            pos += runs[r];
        }
        if (k.claim(out.labels.data(), bits.data(), bits.size(), next) > 0) ++next;
    }
    return out;
}

}  // namespace agriseg
