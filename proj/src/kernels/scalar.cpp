#include "tables.hpp"

#include <algorithm>
#include <cmath>

namespace agriseg::kernels::detail {
namespace {

NdviAccum ndvi_scalar(const float* pixels, std::size_t count, std::size_t channels,
                      std::size_t nir, std::size_t red, float* out, std::uint8_t* valid_out) {
    NdviAccum acc;
    for (std::size_t i = 0; i < count; ++i) {
        const float n = pixels[i * channels + nir];
        const float r = pixels[i * channels + red];
        const float denom = n + r;
        const bool ok = denom != 0.0f;
        const float v = ok ? (n - r) / denom : 0.0f;
        if (ok) {
            acc.sum += static_cast<double>(v);
            ++acc.valid;
        }
        if (out) out[i] = v;
        if (valid_out) valid_out[i] = ok ? 1 : 0;
    }
    return acc;
}

void stretch_scalar(const float* src, std::size_t count, std::size_t stride, float lo,
                    float scale, std::uint8_t* dst) {
    for (std::size_t i = 0; i < count; ++i) {
        float x = (src[i * stride] - lo) * scale;
        x = std::min(std::max(x, 0.0f), 255.0f);
        dst[i] = static_cast<std::uint8_t>(static_cast<int>(std::floor(x + 0.5f)));
    }
}

std::uint64_t count_bright_scalar(const std::uint8_t* rgb, std::size_t pixels,
                                  std::uint8_t threshold) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < pixels; ++i) {
        const std::uint8_t m = std::min({rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]});
        n += m > threshold ? 1 : 0;
    }
    return n;
}

std::size_t next_change_scalar(const std::uint8_t* bits, std::size_t from, std::size_t n) {
    if (from >= n) return n;
    const std::uint8_t v = bits[from];
    std::size_t i = from + 1;
    while (i < n && bits[i] == v) ++i;
    return i;
}

std::uint64_t claim_scalar(std::uint32_t* labels, const std::uint8_t* mask, std::size_t n,
                           std::uint32_t label) {
    std::uint64_t claimed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == 0 && mask[i] != 0) {
            labels[i] = label;
            ++claimed;
        }
    }
    return claimed;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar",          ndvi_scalar,        stretch_scalar,
                                   count_bright_scalar, next_change_scalar, claim_scalar};
    return table;
}

}  // namespace agriseg::kernels::detail
