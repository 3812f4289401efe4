#include <numeric>

#include "agriseg/kernels.hpp"
#include "agriseg/mask.hpp"

namespace agriseg {

Rle encode_rle(std::span<const std::uint8_t> bitmap) {
    const auto& k = kernels::active();
    const std::size_t n = bitmap.size();
    Rle runs;
    if (n == 0 || bitmap[0] != 0) runs.push_back(0);
    std::size_t i = 0;
    while (i < n) {
        const std::size_t j = k.next_change(bitmap.data(), i, n);
        runs.push_back(static_cast<std::uint32_t>(j - i));
        i = j;
    }
    return runs;
}

std::vector<std::uint8_t> decode_rle(std::span<const std::uint32_t> runs, std::size_t height,
                                     std::size_t width) {
    const std::uint64_t total = std::accumulate(runs.begin(), runs.end(), std::uint64_t{0});
    if (total != static_cast<std::uint64_t>(height) * width)
        throw FormatError("RLE runs sum to " + std::to_string(total) + ", expected " +
                          std::to_string(height * width));
    std::vector<std::uint8_t> bits(height * width, 0);
    std::size_t pos = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (r % 2 == 1) std::fill_n(bits.begin() + static_cast<std::ptrdiff_t>(pos), runs[r], std::uint8_t{1});
        pos += runs[r];
    }
    return bits;
}

Rle canonical_rle(std::span<const std::uint32_t> runs) {
    Rle out{0};
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (runs[r] == 0) continue;
        const bool foreground = r % 2 == 1;
        const bool last_foreground = out.size() % 2 == 0;
        if (foreground == last_foreground) {
            out.back() += runs[r];
        } else {
            out.push_back(runs[r]);
        }
    }
    return out;
}

std::uint64_t rle_area(std::span<const std::uint32_t> runs) {
    std::uint64_t area = 0;
    for (std::size_t r = 1; r < runs.size(); r += 2) area += runs[r];
    return area;
}

BooleanMask BooleanMask::from_bitmap(std::span<const std::uint8_t> bitmap, std::size_t height,
                                     std::size_t width, double predicted_iou) {
    if (bitmap.size() != height * width) throw ConfigError("bitmap size does not match H*W");
    BooleanMask m;
    m.rle = encode_rle(bitmap);
    m.height = height;
    m.width = width;
    m.predicted_iou = predicted_iou;
    m.area = rle_area(m.rle);
    return m;
}

}  // namespace agriseg
