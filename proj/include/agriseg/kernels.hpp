#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; an AVX2 variant is selected at runtime when the CPU
// supports it. Integer kernels and per-element float results are bitwise
// identical across variants; float reductions agree to rounding.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace agriseg::kernels {

struct NdviAccum {
    double sum = 0.0;
    std::uint64_t valid = 0;
};

struct KernelTable {
    std::string_view name;

    // NDVI over `count` interleaved pixels of `channels` floats each.
    // out/valid_out may be null; invalid pixels (nir + red == 0) write 0 / 0.
    NdviAccum (*ndvi)(const float* pixels, std::size_t count, std::size_t channels,
                      std::size_t nir, std::size_t red, float* out, std::uint8_t* valid_out);

    // dst[i] = round(clamp((src[i*stride] - lo) * scale, 0, 255)).
    void (*stretch_u8)(const float* src, std::size_t count, std::size_t stride, float lo,
                       float scale, std::uint8_t* dst);

    // Number of interleaved RGB pixels whose min channel exceeds `threshold`.
    std::uint64_t (*count_bright)(const std::uint8_t* rgb, std::size_t pixels,
                                  std::uint8_t threshold);

    // Index of the first element in [from, n) that differs from bits[from], or n.
    // bits must hold only 0/1.
    std::size_t (*next_change)(const std::uint8_t* bits, std::size_t from, std::size_t n);

    // labels[i] = label where labels[i] == 0 and mask[i] != 0; returns the count.
    std::uint64_t (*claim)(std::uint32_t* labels, const std::uint8_t* mask, std::size_t n,
                           std::uint32_t label);
};

const KernelTable& scalar();

/// AVX2 table, or null when not compiled in or not supported by this CPU.
const KernelTable* avx2();

/// Kernel table used by the library. AVX2 when available, unless the
/// AGRISEG_FORCE_SCALAR environment variable is set to a non-empty value.
const KernelTable& active();

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available();

}  // namespace agriseg::kernels
