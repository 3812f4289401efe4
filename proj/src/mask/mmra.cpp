#include "agriseg/mask.hpp"

namespace agriseg {
namespace {

// Visits every 4-connected component of pixels equal to `value` and calls
// on_component(pixels, touches_border).
template <typename Fn>
void for_each_component(const std::vector<std::uint8_t>& bits, std::size_t height,
                        std::size_t width, std::uint8_t value, Fn&& on_component) {
    std::vector<std::uint8_t> seen(bits.size(), 0);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> pixels;
    for (std::size_t start = 0; start < bits.size(); ++start) {
        if (seen[start] || bits[start] != value) continue;
        pixels.clear();
        bool border = false;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            pixels.push_back(p);
            const std::size_t r = p / width;
            const std::size_t c = p % width;
            if (r == 0 || c == 0 || r + 1 == height || c + 1 == width) border = true;
            auto visit = [&](std::size_t q) {
                if (!seen[q] && bits[q] == value) {
                    seen[q] = 1;
                    stack.push_back(q);
                }
            };
            if (r > 0) visit(p - width);
            if (r + 1 < height) visit(p + width);
            if (c > 0) visit(p - 1);
            if (c + 1 < width) visit(p + 1);
        }
        on_component(pixels, border);
    }
}

}  // namespace

void remove_small_regions(std::vector<std::uint8_t>& bitmap, std::size_t height,
                          std::size_t width, std::uint64_t mmra) {
    if (mmra == 0 || bitmap.empty()) return;
    for_each_component(bitmap, height, width, 0, [&](const auto& pixels, bool border) {
        if (!border && pixels.size() < mmra)
            for (std::size_t p : pixels) bitmap[p] = 1;
    });
    for_each_component(bitmap, height, width, 1, [&](const auto& pixels, bool) {
        if (pixels.size() < mmra)
            for (std::size_t p : pixels) bitmap[p] = 0;
    });
}

BooleanMask filter_mmra(const BooleanMask& mask, std::uint64_t mmra) {
    if (mmra == 0) return mask;
    auto bits = mask.bitmap();
    remove_small_regions(bits, mask.height, mask.width, mmra);
    return BooleanMask::from_bitmap(bits, mask.height, mask.width, mask.predicted_iou);
}

}  // namespace agriseg
