// Compiled with -mavx2; only reached through avx2_table() after a CPUID check.
#include "tables.hpp"

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>

namespace agriseg::kernels::detail {
namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

NdviAccum ndvi_avx2(const float* pixels, std::size_t count, std::size_t channels,
                    std::size_t nir, std::size_t red, float* out, std::uint8_t* valid_out) {
    const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    const __m256i idx = _mm256_mullo_epi32(lane, _mm256_set1_epi32(static_cast<int>(channels)));
    const __m256 zero = _mm256_setzero_ps();
    const __m256 one = _mm256_set1_ps(1.0f);
    __m256d sum_lo = _mm256_setzero_pd();
    __m256d sum_hi = _mm256_setzero_pd();
    std::uint64_t valid = 0;

    std::size_t i = 0;
    for (; i + 8 <= count; i += 8) {
        const float* base = pixels + i * channels;
        const __m256 n = _mm256_i32gather_ps(base + nir, idx, 4);
        const __m256 r = _mm256_i32gather_ps(base + red, idx, 4);
        const __m256 denom = _mm256_add_ps(n, r);
        const __m256 ok = _mm256_cmp_ps(denom, zero, _CMP_NEQ_OQ);
        // divide by 1 in invalid lanes so no inf/nan is produced, then zero them
        const __m256 safe = _mm256_blendv_ps(one, denom, ok);
        const __m256 v = _mm256_and_ps(_mm256_div_ps(_mm256_sub_ps(n, r), safe), ok);
        sum_lo = _mm256_add_pd(sum_lo, _mm256_cvtps_pd(_mm256_castps256_ps128(v)));
        sum_hi = _mm256_add_pd(sum_hi, _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)));
        const int bits = _mm256_movemask_ps(ok);
        valid += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(bits)));
        if (out) _mm256_storeu_ps(out + i, v);
        if (valid_out) {
            for (int k = 0; k < 8; ++k) valid_out[i + k] = (bits >> k) & 1;
        }
    }
    NdviAccum acc;
    acc.sum = hsum(_mm256_add_pd(sum_lo, sum_hi));
    acc.valid = valid;
    const NdviAccum tail =
        scalar_table().ndvi(pixels + i * channels, count - i, channels, nir, red,
                            out ? out + i : nullptr, valid_out ? valid_out + i : nullptr);
    acc.sum += tail.sum;
    acc.valid += tail.valid;
    return acc;
}

void stretch_avx2(const float* src, std::size_t count, std::size_t stride, float lo,
                  float scale, std::uint8_t* dst) {
    const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    const __m256i idx = _mm256_mullo_epi32(lane, _mm256_set1_epi32(static_cast<int>(stride)));
    const __m256 vlo = _mm256_set1_ps(lo);
    const __m256 vscale = _mm256_set1_ps(scale);
    const __m256 vmin = _mm256_setzero_ps();
    const __m256 vmax = _mm256_set1_ps(255.0f);
    const __m256 half = _mm256_set1_ps(0.5f);

    std::size_t i = 0;
    for (; i + 8 <= count; i += 8) {
        const __m256 v = stride == 1 ? _mm256_loadu_ps(src + i)
                                     : _mm256_i32gather_ps(src + i * stride, idx, 4);
        __m256 x = _mm256_mul_ps(_mm256_sub_ps(v, vlo), vscale);
        x = _mm256_min_ps(_mm256_max_ps(x, vmin), vmax);
        x = _mm256_floor_ps(_mm256_add_ps(x, half));
        const __m256i q = _mm256_cvttps_epi32(x);
        const __m128i w = _mm_packus_epi32(_mm256_castsi256_si128(q), _mm256_extracti128_si256(q, 1));
        _mm_storel_epi64(reinterpret_cast<__m128i*>(dst + i), _mm_packus_epi16(w, w));
    }
    scalar_table().stretch_u8(src + i * stride, count - i, stride, lo, scale, dst + i);
}

std::uint64_t count_bright_avx2(const std::uint8_t* rgb, std::size_t pixels,
                                std::uint8_t threshold) {
    if (threshold == 255) return 0;
    const std::size_t bytes = pixels * 3;
    const __m256i above = _mm256_set1_epi8(static_cast<char>(threshold + 1));
    // one bit per pixel start: byte offsets 0, 3, ..., 27
    constexpr unsigned kPixelStarts = 0x09249249u;
    std::uint64_t n = 0;
    std::size_t off = 0;
    // 10 pixels per step; the three shifted loads read up to off + 34
    for (; off + 34 <= bytes; off += 30) {
        const auto* p = reinterpret_cast<const __m256i*>(rgb + off);
        const __m256i a = _mm256_loadu_si256(p);
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rgb + off + 1));
        const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rgb + off + 2));
        const __m256i m = _mm256_min_epu8(_mm256_min_epu8(a, b), c);
        const __m256i bright = _mm256_cmpeq_epi8(_mm256_max_epu8(m, above), m);
        const auto mask = static_cast<unsigned>(_mm256_movemask_epi8(bright)) & kPixelStarts;
        n += static_cast<std::uint64_t>(std::popcount(mask));
    }
    return n + scalar_table().count_bright(rgb + off, pixels - off / 3, threshold);
}

std::size_t next_change_avx2(const std::uint8_t* bits, std::size_t from, std::size_t n) {
    if (from >= n) return n;
    const __m256i v = _mm256_set1_epi8(static_cast<char>(bits[from]));
    std::size_t i = from + 1;
    for (; i + 32 <= n; i += 32) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bits + i));
        const auto same = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(x, v)));
        if (same != 0xFFFFFFFFu) return i + static_cast<std::size_t>(std::countr_one(same));
    }
    while (i < n && bits[i] == bits[from]) ++i;
    return i;
}

std::uint64_t claim_avx2(std::uint32_t* labels, const std::uint8_t* mask, std::size_t n,
                         std::uint32_t label) {
    const __m256i zero = _mm256_setzero_si256();
    const __m256i vlabel = _mm256_set1_epi32(static_cast<int>(label));
    std::uint64_t claimed = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        auto* lp = reinterpret_cast<__m256i*>(labels + i);
        const __m256i l = _mm256_loadu_si256(lp);
        const __m256i m = _mm256_cvtepu8_epi32(
            _mm_loadl_epi64(reinterpret_cast<const __m128i*>(mask + i)));
        const __m256i take = _mm256_andnot_si256(_mm256_cmpeq_epi32(m, zero),
                                                 _mm256_cmpeq_epi32(l, zero));
        _mm256_storeu_si256(lp, _mm256_blendv_epi8(l, vlabel, take));
        claimed += static_cast<std::uint64_t>(std::popcount(
            static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(take)))));
    }
    return claimed + scalar_table().claim(labels + i, mask + i, n - i, label);
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{"avx2",          ndvi_avx2,        stretch_avx2,
                                   count_bright_avx2, next_change_avx2, claim_avx2};
    return table;
}

}  // namespace agriseg::kernels::detail
