#include <cstring>
#include <vector>

#include "agriseg/kernels.hpp"
#include "agriseg/rng.hpp"
#include "doctest.h"

using namespace agriseg;

namespace {

const kernels::KernelTable* simd() {
    const auto* t = kernels::avx2();
    if (!t) MESSAGE("AVX2 table not available on this machine; equivalence checks skipped");
    return t;
}

// lengths around every vector width and tail
const std::size_t kLengths[] = {0, 1, 2, 3, 7, 8, 9, 10, 11, 15, 16, 17, 31, 32, 33, 63, 64, 65, 100, 257, 1000, 4099};

}  // namespace

TEST_CASE("kernel tables") {
    CHECK(kernels::scalar().name == "scalar");
    const auto all = kernels::available();
    REQUIRE_FALSE(all.empty());
    CHECK(all.front() == &kernels::scalar());
    if (const auto* t = kernels::avx2()) CHECK(t->name == "avx2");
}

TEST_CASE("ndvi: scalar and avx2 agree per pixel") {
    const auto* v = simd();
    if (!v) return;
    const auto& s = kernels::scalar();
    Rng rng(1);
    for (std::size_t channels : {2u, 4u, 13u}) {
        for (std::size_t n : kLengths) {
            std::vector<float> px(n * channels);
            for (auto& x : px) x = static_cast<float>(rng.uniform());
            // some invalid pixels (nir + red == 0) and negative reflectance
            for (std::size_t i = 0; i < n; i += 7) {
                px[i * channels + 0] = 0.0f;
                px[i * channels + 1] = 0.0f;
            }
            for (std::size_t i = 3; i < n; i += 11) px[i * channels + 1] = -0.25f;
            std::vector<float> a(n, -1.0f), b(n, -2.0f);
            std::vector<std::uint8_t> va(n, 9), vb(n, 8);
            const auto ra = s.ndvi(px.data(), n, channels, 0, 1, a.data(), va.data());
            const auto rb = v->ndvi(px.data(), n, channels, 0, 1, b.data(), vb.data());
            CHECK(ra.valid == rb.valid);
            CHECK((n == 0 || std::memcmp(a.data(), b.data(), n * sizeof(float)) == 0));
            CHECK(va == vb);
            CHECK(ra.sum == doctest::Approx(rb.sum).epsilon(1e-12));
            // null outputs only accumulate
            const auto rc = v->ndvi(px.data(), n, channels, 1, 0, nullptr, nullptr);
            const auto rd = s.ndvi(px.data(), n, channels, 1, 0, nullptr, nullptr);
            CHECK(rc.valid == rd.valid);
            CHECK(rc.sum == doctest::Approx(rd.sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("stretch_u8: scalar and avx2 agree bitwise") {
    const auto* v = simd();
    if (!v) return;
    Rng rng(2);
    for (std::size_t stride : {1u, 3u, 4u}) {
        for (std::size_t n : kLengths) {
            std::vector<float> src(n * stride);
            for (auto& x : src) x = static_cast<float>(rng.uniform() * 1.4 - 0.2);
            std::vector<std::uint8_t> a(n), b(n);
            kernels::scalar().stretch_u8(src.data(), n, stride, 0.1f, 255.0f / 0.8f, a.data());
            v->stretch_u8(src.data(), n, stride, 0.1f, 255.0f / 0.8f, b.data());
            CHECK(a == b);
        }
    }
}

TEST_CASE("stretch_u8 rounds half up and clamps") {
    const float src[] = {-1.0f, 0.0f, 0.5f, 1.5f, 2.5f, 254.5f, 255.0f, 1000.0f};
    for (const auto* t : kernels::available()) {
        std::uint8_t out[8];
        t->stretch_u8(src, 8, 1, 0.0f, 1.0f, out);
        const std::uint8_t want[] = {0, 0, 1, 2, 3, 255, 255, 255};
        CHECK(std::memcmp(out, want, 8) == 0);
    }
}

TEST_CASE("count_bright: scalar and avx2 agree") {
    const auto* v = simd();
    if (!v) return;
    Rng rng(3);
    for (std::size_t n : kLengths) {
        std::vector<std::uint8_t> rgb(n * 3);
        for (auto& x : rgb) x = static_cast<std::uint8_t>(180 + rng.below(76));
        for (std::uint8_t thr : {std::uint8_t{0}, std::uint8_t{199}, std::uint8_t{200}, std::uint8_t{255}})
            CHECK(kernels::scalar().count_bright(rgb.data(), n, thr) == v->count_bright(rgb.data(), n, thr));
    }
}

TEST_CASE("next_change: scalar and avx2 agree") {
    const auto* v = simd();
    if (!v) return;
    Rng rng(4);
    for (std::size_t n : kLengths) {
        std::vector<std::uint8_t> bits(n);
        for (std::size_t i = 0; i < n;) {
            const std::size_t run = 1 + rng.below(70);
            const auto b = static_cast<std::uint8_t>(rng.below(2));
            for (std::size_t j = 0; j < run && i < n; ++j) bits[i++] = b;
        }
        for (std::size_t from = 0; from < n; ++from)
            CHECK(kernels::scalar().next_change(bits.data(), from, n) == v->next_change(bits.data(), from, n));
    }
}

TEST_CASE("claim: scalar and avx2 agree") {
    const auto* v = simd();
    if (!v) return;
    Rng rng(5);
    for (std::size_t n : kLengths) {
        std::vector<std::uint32_t> base(n);
        std::vector<std::uint8_t> mask(n);
        for (auto& x : base) x = rng.below(3) == 0 ? static_cast<std::uint32_t>(rng.below(9)) : 0;
        for (auto& x : mask) x = static_cast<std::uint8_t>(rng.below(2));
        auto a = base, b = base;
        const auto ca = kernels::scalar().claim(a.data(), mask.data(), n, 77);
        const auto cb = v->claim(b.data(), mask.data(), n, 77);
        CHECK(ca == cb);
        CHECK(a == b);
    }
}
